#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sboxlab/errors.hpp"
#include "sboxlab/sbox.hpp"

namespace sboxlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Deterministic 64-bit generator. Bounded draws and shuffles are written
/// out here rather than using <random> distributions, whose output is
/// implementation-defined, so a seed reproduces across standard libraries.
class SeededRng {
 public:
  static constexpr std::string_view kName = "mt19937_64+splitmix64-streams";

  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t a = splitmix64(seed);
    std::uint64_t b = splitmix64(a ^ splitmix64(stream + 0x632BE59BD9B4E019ull));
    std::array<std::uint32_t, 4> words = {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound), bound >= 1, by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Fisher-Yates shuffle of [0, size).
inline SBox random_permutation(SeededRng& rng, std::size_t size) {
  if (size < 4 || !std::has_single_bit(size)) throw ConfigError("random_permutation: size must be 2^n, n >= 2");
  std::vector<Element> t(size);
  std::iota(t.begin(), t.end(), Element{0});
  for (std::size_t i = size - 1; i > 0; --i) std::swap(t[i], t[rng.below(i + 1)]);
  return SBox(std::countr_zero(size), std::move(t));
}

/// Requested cycle type of a permutation of [0, total()).
class CycleSpec {
 public:
  CycleSpec() = default;
  explicit CycleSpec(std::vector<std::size_t> lengths) : lengths_(std::move(lengths)) {
    if (lengths_.empty()) throw ConfigError("cycle spec must contain at least one cycle");
    for (std::size_t len : lengths_) {
      if (len < 1) throw ConfigError("cycle lengths must be >= 1");
    }
  }

  /// Comma/space separated positive integers, e.g. "59,81,87,27,2".
  static CycleSpec parse(std::string_view text) {
    std::vector<std::size_t> out;
    std::string cur;
    auto flush = [&] {
      if (cur.empty()) return;
      std::size_t v = 0;
      for (char c : cur) {
        if (c < '0' || c > '9' || cur.size() > 6) throw ConfigError("invalid cycle length '" + cur + "'");
        v = v * 10 + static_cast<std::size_t>(c - '0');
      }
      out.push_back(v);
      cur.clear();
    };
    for (char c : text) {
      if (c == ',' || c == ' ') {
        flush();
      } else {
        cur.push_back(c);
      }
    }
    flush();
    return CycleSpec(std::move(out));
  }

  const std::vector<std::size_t>& lengths() const { return lengths_; }
  std::size_t total() const { return std::accumulate(lengths_.begin(), lengths_.end(), std::size_t{0}); }

  std::vector<std::size_t> sorted() const {
    auto s = lengths_;
    std::sort(s.begin(), s.end());
    return s;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < lengths_.size(); ++i) s += (i ? "," : "") + std::to_string(lengths_[i]);
    return s;
  }

  friend bool operator==(const CycleSpec&, const CycleSpec&) = default;

 private:
  std::vector<std::size_t> lengths_;
};

/// Builds each cycle from elements drawn without replacement from the
/// unused pool, linked in draw order and closed back to the first.
inline SBox random_permutation_with_cycles(SeededRng& rng, const CycleSpec& spec) {
  const std::size_t size = spec.total();
  if (size < 4 || !std::has_single_bit(size) || size > (std::size_t{1} << kMaxBits)) {
    throw ConfigError("cycle spec must sum to 2^n with 2 <= n <= 12, sums to " + std::to_string(size));
  }
  std::vector<Element> pool(size);
  std::iota(pool.begin(), pool.end(), Element{0});
  std::vector<Element> table(size);
  std::size_t remaining = size;
  for (std::size_t len : spec.lengths()) {
    // Partial Fisher-Yates: move each draw to the tail of the live pool.
    const std::size_t tail = remaining - len;
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t pick = rng.below(remaining - k);
      std::swap(pool[pick], pool[remaining - k - 1]);
    }
    // Draw order is pool[remaining-1], pool[remaining-2], ..., pool[tail].
    for (std::size_t k = 0; k < len; ++k) {
      const Element from = pool[remaining - 1 - k];
      const Element to = pool[k + 1 < len ? remaining - 2 - k : remaining - 1];
      table[from] = to;
    }
    remaining = tail;
  }
  return SBox(std::countr_zero(size), std::move(table));
}

}  // namespace sboxlab
