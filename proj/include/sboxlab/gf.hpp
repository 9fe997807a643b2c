#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sboxlab/errors.hpp"
#include "sboxlab/sbox.hpp"

namespace sboxlab {

/// One irreducible polynomial per supported width, including the x^n term.
inline std::uint32_t default_irreducible(int n) {
  static constexpr std::array<std::uint32_t, kMaxBits + 1> table = {
      0, 0,
      0x7,     // x^2+x+1
      0xB,     // x^3+x+1
      0x13,    // x^4+x+1
      0x25,    // x^5+x^2+1
      0x43,    // x^6+x+1
      0x83,    // x^7+x+1
      0x11B,   // x^8+x^4+x^3+x+1 (AES)
      0x211,   // x^9+x^4+1
      0x409,   // x^10+x^3+1
      0x805,   // x^11+x^2+1
      0x1053,  // x^12+x^6+x^4+x+1
  };
  if (n < kMinBits || n > kMaxBits) throw ConfigError("no default irreducible for n=" + std::to_string(n));
  return table[static_cast<std::size_t>(n)];
}

/// GF(2^n) = GF(2)[x] / (irreducible).
class GFContext {
 public:
  explicit GFContext(int n) : GFContext(n, default_irreducible(n)) {}

  GFContext(int n, std::uint32_t irreducible) : bits_(n), modulus_(irreducible) {
    if (n < kMinBits || n > kMaxBits) throw ConfigError("field width must be in [2, 12]");
    if ((irreducible >> n) != 1u) {
      throw ConfigError("irreducible mask must have degree exactly " + std::to_string(n));
    }
  }

  int bits() const { return bits_; }
  std::uint32_t modulus() const { return modulus_; }
  std::size_t order() const { return std::size_t{1} << bits_; }

  Element mul(Element a, Element b) const {
    // Carry-less product then reduction from the top bit down.
    std::uint32_t product = 0;
    for (int i = 0; i < bits_; ++i) {
      if ((b >> i) & 1u) product ^= a << i;
    }
    for (int deg = 2 * bits_ - 2; deg >= bits_; --deg) {
      if ((product >> deg) & 1u) product ^= modulus_ << (deg - bits_);
    }
    return product;
  }

  /// x^0 = 1 for every x, including 0.
  Element pow(Element x, std::uint64_t e) const {
    Element result = 1;
    Element base = x;
    while (e != 0) {
      if (e & 1u) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }

  /// Absolute trace x + x^2 + x^4 + ... + x^(2^(n-1)); always 0 or 1.
  Element trace(Element x) const {
    Element sum = 0;
    Element conj = x;
    for (int i = 0; i < bits_; ++i) {
      sum ^= conj;
      conj = mul(conj, conj);
    }
    return sum;
  }

 private:
  int bits_;
  std::uint32_t modulus_;
};

enum class MonomialFamily { gold, kasami, welch, niho, dobbertin, inverse, raw };

inline std::optional<MonomialFamily> parse_monomial_family(std::string_view name) {
  if (name == "gold") return MonomialFamily::gold;
  if (name == "kasami") return MonomialFamily::kasami;
  if (name == "welch") return MonomialFamily::welch;
  if (name == "niho") return MonomialFamily::niho;
  if (name == "dobbertin") return MonomialFamily::dobbertin;
  if (name == "inverse") return MonomialFamily::inverse;
  if (name == "raw") return MonomialFamily::raw;
  return std::nullopt;
}

inline std::string_view to_string(MonomialFamily f) {
  switch (f) {
    case MonomialFamily::gold: return "gold";
    case MonomialFamily::kasami: return "kasami";
    case MonomialFamily::welch: return "welch";
    case MonomialFamily::niho: return "niho";
    case MonomialFamily::dobbertin: return "dobbertin";
    case MonomialFamily::inverse: return "inverse";
    case MonomialFamily::raw: return "raw";
  }
  return "?";
}

/// `param` is i for gold/kasami and the exponent itself for raw; the
/// other families derive everything from n.
struct MonomialParams {
  MonomialFamily family = MonomialFamily::raw;
  std::uint64_t param = 1;
};

/// Exponent of the APN power map for the family, after checking its
/// existence condition on n.
inline std::uint64_t monomial_exponent(const MonomialParams& p, int n) {
  const std::string family(to_string(p.family));
  auto odd_n = [&]() -> std::uint64_t {
    if (n % 2 == 0) throw ConfigError(family + " requires n = 2t+1 (odd n), got n=" + std::to_string(n));
    return static_cast<std::uint64_t>((n - 1) / 2);
  };
  switch (p.family) {
    case MonomialFamily::gold:
    case MonomialFamily::kasami: {
      const std::uint64_t i = p.param;
      if (i < 1 || i > 20) throw ConfigError(family + " requires 1 <= i <= 20");
      if (std::gcd(i, static_cast<std::uint64_t>(n)) != 1) {
        throw ConfigError(family + " requires gcd(i, n) = 1, got gcd(" + std::to_string(i) + ", " +
                          std::to_string(n) + ") = " + std::to_string(std::gcd(i, static_cast<std::uint64_t>(n))));
      }
      if (p.family == MonomialFamily::gold) return (std::uint64_t{1} << i) + 1;
      return (std::uint64_t{1} << (2 * i)) - (std::uint64_t{1} << i) + 1;
    }
    case MonomialFamily::welch: {
      const std::uint64_t t = odd_n();
      return (std::uint64_t{1} << t) + 3;
    }
    case MonomialFamily::niho: {
      const std::uint64_t t = odd_n();
      if (t % 2 == 0) return (std::uint64_t{1} << t) + (std::uint64_t{1} << (t / 2)) - 1;
      return (std::uint64_t{1} << t) + (std::uint64_t{1} << ((3 * t + 1) / 2)) - 1;
    }
    case MonomialFamily::dobbertin: {
      if (n % 5 != 0) throw ConfigError("dobbertin requires n = 5i, got n=" + std::to_string(n));
      const std::uint64_t i = static_cast<std::uint64_t>(n / 5);
      return (std::uint64_t{1} << (4 * i)) + (std::uint64_t{1} << (3 * i)) + (std::uint64_t{1} << (2 * i)) +
             (std::uint64_t{1} << i) - 1;
    }
    case MonomialFamily::inverse: {
      const std::uint64_t t = odd_n();
      return (std::uint64_t{1} << (2 * t)) - 1;
    }
    case MonomialFamily::raw:
      if (p.param < 1) throw ConfigError("raw requires exponent e >= 1");
      return p.param;
  }
  throw ConfigError("unknown monomial family");
}

/// S(x) = x^e over the context's field, with S(0) = 0.
inline SBox build_monomial_sbox(const GFContext& ctx, std::uint64_t exponent) {
  if (exponent < 1) throw ConfigError("power map exponent must be >= 1");
  std::vector<Element> table(ctx.order());
  for (Element x = 1; x < table.size(); ++x) table[x] = ctx.pow(x, exponent);
  table[0] = 0;
  return SBox(ctx.bits(), std::move(table));
}

inline SBox build_monomial_sbox(const GFContext& ctx, const MonomialParams& p) {
  return build_monomial_sbox(ctx, monomial_exponent(p, ctx.bits()));
}

}  // namespace sboxlab
