#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sboxlab/errors.hpp"

namespace sboxlab {

/// Field element / table value. Bit i is the coefficient of x^i.
using Element = std::uint32_t;

inline constexpr int kMinBits = 2;
inline constexpr int kMaxBits = 12;

/// An n-bit to n-bit lookup table. Bijectivity is a computed property,
/// not an invariant: power maps such as x^3 are valid S-boxes here.
class SBox {
 public:
  SBox(int bits, std::vector<Element> table) : bits_(bits), table_(std::move(table)) {
    if (bits_ < kMinBits || bits_ > kMaxBits) {
      throw ConfigError("S-box width must be in [" + std::to_string(kMinBits) + ", " +
                        std::to_string(kMaxBits) + "], got " + std::to_string(bits_));
    }
    if (table_.size() != (std::size_t{1} << bits_)) {
      throw ConfigError("S-box table must have exactly 2^" + std::to_string(bits_) + " entries, got " +
                        std::to_string(table_.size()));
    }
    const Element limit = static_cast<Element>(table_.size());
    for (std::size_t x = 0; x < table_.size(); ++x) {
      if (table_[x] >= limit) {
        throw ConfigError("S-box entry " + std::to_string(x) + " = " + std::to_string(table_[x]) +
                          " is outside [0, " + std::to_string(limit) + ")");
      }
    }
  }

  static SBox identity(int bits) {
    std::vector<Element> t(std::size_t{1} << bits);
    std::iota(t.begin(), t.end(), Element{0});
    return SBox(bits, std::move(t));
  }

  int bits() const { return bits_; }
  std::size_t size() const { return table_.size(); }
  Element mask() const { return static_cast<Element>(table_.size() - 1); }
  Element operator[](Element x) const { return table_[x]; }
  Element operator()(Element x) const { return table_[x]; }
  std::span<const Element> table() const { return table_; }

  friend bool operator==(const SBox&, const SBox&) = default;

 private:
  int bits_;
  std::vector<Element> table_;
};

inline bool is_bijective(const SBox& s) {
  std::vector<bool> seen(s.size(), false);
  for (Element v : s.table()) {
    if (seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

inline SBox inverse_sbox(const SBox& s) {
  if (!is_bijective(s)) throw PreconditionError("inverse_sbox: S-box is not a permutation");
  std::vector<Element> inv(s.size());
  for (Element x = 0; x < s.size(); ++x) inv[s[x]] = x;
  return SBox(s.bits(), std::move(inv));
}

inline int hamming_distance(Element x, Element y) { return std::popcount(x ^ y); }

/// Parses whitespace/comma separated integers. Brackets are ignored so a
/// Python-style list loads as-is. Base 16 accepts tokens with or without 0x.
inline SBox parse_sbox(std::string_view text, int base = 10) {
  if (base != 10 && base != 16) throw ConfigError("parse_sbox: base must be 10 or 16");

  struct Token {
    std::string text;
    std::size_t line;
  };
  std::vector<Token> tokens;
  std::size_t line = 1;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back({std::move(current), line});
    current.clear();
  };
  for (char c : text) {
    if (c == '\n') {
      flush();
      ++line;
    } else if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '[' || c == ']') {
      flush();
    } else {
      current.push_back(c);
    }
  }
  flush();

  const std::size_t count = tokens.size();
  if (count < 4 || count > 4096 || !std::has_single_bit(count)) {
    throw ParseError("expected a power-of-two token count in [4, 4096], got " + std::to_string(count));
  }
  const int bits = std::countr_zero(count);

  std::vector<Element> table;
  table.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Token& tok = tokens[i];
    std::string_view digits = tok.text;
    if (base == 16 && digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
      digits.remove_prefix(2);
    }
    auto fail = [&](const std::string& why) {
      return ParseError("line " + std::to_string(tok.line) + ", token " + std::to_string(i) + " '" + tok.text +
                        "': " + why);
    };
    if (digits.empty() || digits.size() > 8) throw fail("not an integer");
    std::uint64_t value = 0;
    for (char c : digits) {
      int d;
      if (c >= '0' && c <= '9') {
        d = c - '0';
      } else if (base == 16 && c >= 'a' && c <= 'f') {
        d = c - 'a' + 10;
      } else if (base == 16 && c >= 'A' && c <= 'F') {
        d = c - 'A' + 10;
      } else {
        throw fail("not an integer");
      }
      value = value * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(d);
    }
    if (value >= count) throw fail("value out of range [0, " + std::to_string(count) + ")");
    table.push_back(static_cast<Element>(value));
  }
  return SBox(bits, std::move(table));
}

/// Decimal, 0-indexed, comma separated, 16 values per line.
inline std::string format_sbox(const SBox& s) {
  std::ostringstream os;
  for (std::size_t x = 0; x < s.size(); ++x) {
    os << s[static_cast<Element>(x)];
    if (x + 1 == s.size()) {
      os << '\n';
    } else if ((x + 1) % 16 == 0) {
      os << ",\n";
    } else {
      os << ", ";
    }
  }
  return os.str();
}

struct CycleStructure {
  // Each cycle starts at its smallest element; cycles ordered by that element.
  std::vector<std::vector<Element>> cycles;
  std::size_t fixed_points = 0;
  std::size_t opposite_fixed_points = 0;

  std::vector<std::size_t> lengths() const {
    std::vector<std::size_t> out;
    out.reserve(cycles.size());
    for (const auto& c : cycles) out.push_back(c.size());
    return out;
  }

  std::vector<std::size_t> sorted_lengths() const {
    auto out = lengths();
    std::sort(out.begin(), out.end());
    return out;
  }
};

inline CycleStructure cycle_decomposition(const SBox& s) {
  if (!is_bijective(s)) throw PreconditionError("cycle_decomposition: S-box is not a permutation");
  CycleStructure out;
  std::vector<bool> visited(s.size(), false);
  for (Element start = 0; start < s.size(); ++start) {
    if (visited[start]) continue;
    std::vector<Element> cycle;
    for (Element x = start; !visited[x]; x = s[x]) {
      visited[x] = true;
      cycle.push_back(x);
    }
    out.cycles.push_back(std::move(cycle));
  }
  const Element all_ones = s.mask();
  for (Element x = 0; x < s.size(); ++x) {
    if (s[x] == x) ++out.fixed_points;
    if ((s[x] ^ x) == all_ones) ++out.opposite_fixed_points;
  }
  return out;
}

}  // namespace sboxlab
