#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sboxlab/errors.hpp"
#include "sboxlab/sbox.hpp"

namespace sboxlab {

/// Boolean function on n bits; bits[x] = f(x).
struct TruthTable {
  int n = 0;
  std::vector<std::uint8_t> bits;

  friend bool operator==(const TruthTable&, const TruthTable&) = default;
};

/// coeffs[a] = c_a, the coefficient of the monomial prod_{i in a} x_i.
struct AnfCoefficients {
  int n = 0;
  std::vector<std::uint8_t> coeffs;

  friend bool operator==(const AnfCoefficients&, const AnfCoefficients&) = default;
};

/// x -> mask.S(x)
inline TruthTable component_function(const SBox& s, Element mask) {
  TruthTable t{s.bits(), std::vector<std::uint8_t>(s.size())};
  for (Element x = 0; x < s.size(); ++x) t.bits[x] = static_cast<std::uint8_t>(std::popcount(mask & s[x]) & 1);
  return t;
}

inline TruthTable coordinate_function(const SBox& s, int bit) { return component_function(s, Element{1} << bit); }

namespace detail {
inline void mobius_butterfly(std::vector<std::uint8_t>& v) {
  const std::size_t size = v.size();
  for (std::size_t h = 1; h < size; h <<= 1) {
    for (std::size_t i = 0; i < size; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) v[j + h] ^= v[j];
    }
  }
}
}  // namespace detail

/// Binary Moebius transform; it is its own inverse.
inline AnfCoefficients mobius_transform(const TruthTable& t) {
  AnfCoefficients a{t.n, t.bits};
  detail::mobius_butterfly(a.coeffs);
  return a;
}

inline TruthTable evaluate_anf(const AnfCoefficients& a) {
  TruthTable t{a.n, a.coeffs};
  detail::mobius_butterfly(t.bits);
  return t;
}

/// Largest monomial with c_a = 1; the zero function has degree 0.
inline int anf_degree(const AnfCoefficients& a) {
  int deg = 0;
  for (std::size_t m = 0; m < a.coeffs.size(); ++m) {
    if (a.coeffs[m]) deg = std::max(deg, std::popcount(m));
  }
  return deg;
}

/// Max degree over all 2^n - 1 nonzero components.
inline int algebraic_degree(const SBox& s) {
  int deg = 0;
  for (Element b = 1; b < s.size(); ++b) deg = std::max(deg, anf_degree(mobius_transform(component_function(s, b))));
  return deg;
}

/// Rank over GF(2) of bit-packed rows, each `width` bits long.
inline std::size_t gf2_rank(std::vector<std::vector<std::uint64_t>> rows, std::size_t width) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < width && rank < rows.size(); ++col) {
    const std::size_t word = col / 64;
    const std::uint64_t bit = std::uint64_t{1} << (col % 64);
    std::size_t pivot = rank;
    while (pivot < rows.size() && !(rows[pivot][word] & bit)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && (rows[r][word] & bit)) {
        for (std::size_t w = word; w < rows[r].size(); ++w) rows[r][w] ^= rows[rank][w];
      }
    }
    ++rank;
  }
  return rank;
}

namespace detail {

// Monomials of degree <= d, ordered by popcount then value.
inline std::vector<Element> monomials_up_to(int n, int d) {
  std::vector<Element> out;
  for (Element m = 0; m < (Element{1} << n); ++m) {
    if (std::popcount(m) <= d) out.push_back(m);
  }
  std::stable_sort(out.begin(), out.end(), [](Element a, Element b) { return std::popcount(a) < std::popcount(b); });
  return out;
}

// A nonzero g of degree <= d vanishing on every point of `support` exists
// iff the evaluation matrix (points x monomials) has rank < #monomials.
inline bool has_annihilator(const std::vector<Element>& support, const std::vector<Element>& monomials) {
  if (support.size() < monomials.size()) return true;
  const std::size_t width = monomials.size();
  const std::size_t words = (width + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows(support.size(), std::vector<std::uint64_t>(words, 0));
  for (std::size_t r = 0; r < support.size(); ++r) {
    const Element x = support[r];
    for (std::size_t k = 0; k < width; ++k) {
      if ((monomials[k] & x) == monomials[k]) rows[r][k / 64] |= std::uint64_t{1} << (k % 64);
    }
  }
  return gf2_rank(std::move(rows), width) < width;
}

}  // namespace detail

/// Smallest d <= max_degree with a nonzero annihilator of degree <= d for
/// f or f + 1; nullopt when none exists up to max_degree.
inline std::optional<int> algebraic_immunity(const TruthTable& t, int max_degree) {
  if (max_degree < 0 || max_degree > t.n) throw ConfigError("algebraic_immunity: max_degree must be in [0, n]");
  std::vector<Element> ones, zeros;
  for (Element x = 0; x < t.bits.size(); ++x) (t.bits[x] ? ones : zeros).push_back(x);
  for (int d = 0; d <= max_degree; ++d) {
    const auto monomials = detail::monomials_up_to(t.n, d);
    // g annihilates f  <=> g = 0 on supp(f); g annihilates f+1 <=> g = 0 on supp(f+1).
    if (detail::has_annihilator(ones, monomials) || detail::has_annihilator(zeros, monomials)) return d;
  }
  return std::nullopt;
}

enum class AiScope { coordinates, components };

inline std::string_view to_string(AiScope s) { return s == AiScope::coordinates ? "coordinates" : "components"; }

/// Min AI over the coordinate functions (or every nonzero component),
/// searched up to ceil(n/2), which always suffices.
inline int sbox_algebraic_immunity(const SBox& s, AiScope scope = AiScope::coordinates) {
  const int bound = (s.bits() + 1) / 2;
  int best = bound;
  auto consider = [&](const TruthTable& t) {
    const auto ai = algebraic_immunity(t, std::min(best, bound));
    if (ai) best = std::min(best, *ai);
  };
  if (scope == AiScope::coordinates) {
    for (int j = 0; j < s.bits() && best > 0; ++j) consider(coordinate_function(s, j));
  } else {
    for (Element b = 1; b < s.size() && best > 0; ++b) consider(component_function(s, b));
  }
  return best;
}

/// One line per coordinate function (bit 0 first): hex masks of the
/// monomials with c_a = 1, space separated. The zero function is an
/// empty line.
inline std::string anf_dump(const SBox& s) {
  const int width = (s.bits() + 3) / 4;
  std::ostringstream os;
  os << std::hex;
  for (int j = 0; j < s.bits(); ++j) {
    const auto anf = mobius_transform(coordinate_function(s, j));
    bool first = true;
    for (std::size_t m = 0; m < anf.coeffs.size(); ++m) {
      if (!anf.coeffs[m]) continue;
      if (!first) os << ' ';
      os << std::setw(width) << std::setfill('0') << m;
      first = false;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace sboxlab
