#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "sboxlab/errors.hpp"
#include "sboxlab/rational.hpp"
#include "sboxlab/sbox.hpp"

namespace sboxlab {

/// Dense 2^n x 2^n matrix indexed [row][column].
template <typename T>
class SquareTable {
 public:
  using value_type = T;

  SquareTable() = default;
  explicit SquareTable(int bits) : bits_(bits), side_(std::size_t{1} << bits), data_(side_ * side_, T{}) {}

  int bits() const { return bits_; }
  std::size_t side() const { return side_; }

  T& operator()(std::size_t row, std::size_t col) { return data_[row * side_ + col]; }
  const T& operator()(std::size_t row, std::size_t col) const { return data_[row * side_ + col]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * side_, side_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * side_, side_}; }
  std::span<const T> values() const { return data_; }

  friend bool operator==(const SquareTable&, const SquareTable&) = default;

 private:
  int bits_ = 0;
  std::size_t side_ = 0;
  std::vector<T> data_;
};

/// counts(a, b) = #{x : S(x) ^ S(x ^ a) = b}
using Ddt = SquareTable<std::uint32_t>;
/// sums(a, b) = sum_x (-1)^(b.S(x) ^ a.x), full Walsh sums (not halved).
using Lat = SquareTable<std::int32_t>;

inline int dot_parity(Element a, Element b) { return std::popcount(a & b) & 1; }

// ---------------------------------------------------------------------------
// Differential uniformity

inline Ddt compute_ddt(const SBox& s) {
  Ddt ddt(s.bits());
  const std::size_t size = s.size();
  for (Element a = 0; a < size; ++a) {
    auto row = ddt.row(a);
    for (Element x = 0; x < size; ++x) ++row[s[x] ^ s[x ^ a]];
  }
  return ddt;
}

/// max over a != 0 and every b.
inline std::uint32_t differential_uniformity(const Ddt& ddt) {
  std::uint32_t best = 0;
  for (std::size_t a = 1; a < ddt.side(); ++a) {
    for (std::uint32_t v : ddt.row(a)) best = std::max(best, v);
  }
  return best;
}

/// Number of entries (a != 0) that attain the differential uniformity.
inline std::size_t du_max_count(const Ddt& ddt) {
  const std::uint32_t du = differential_uniformity(ddt);
  std::size_t count = 0;
  for (std::size_t a = 1; a < ddt.side(); ++a) {
    for (std::uint32_t v : ddt.row(a)) count += (v == du);
  }
  return count;
}

// ---------------------------------------------------------------------------
// Walsh spectrum / linear approximation

/// In-place unnormalized Walsh-Hadamard butterfly. Length must be a power
/// of two. Maps f(x) to F(a) = sum_x f(x) (-1)^(a.x).
inline void walsh_hadamard(std::span<std::int32_t> v) {
  const std::size_t n = v.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const std::int32_t u = v[j];
        const std::int32_t w = v[j + h];
        v[j] = u + w;
        v[j + h] = u - w;
      }
    }
  }
}

/// Walsh spectrum of the component x -> mask.S(x): out[a] = LAT(a, mask).
inline void component_walsh(const SBox& s, Element mask, std::span<std::int32_t> out) {
  for (Element x = 0; x < s.size(); ++x) out[x] = 1 - 2 * dot_parity(mask, s[x]);
  walsh_hadamard(out);
}

/// Columns are independent; `workers > 1` splits them over threads. The
/// result does not depend on the worker count.
inline Lat compute_lat(const SBox& s, unsigned workers = 1) {
  Lat lat(s.bits());
  const std::size_t size = s.size();
  auto fill = [&](std::size_t first_col, std::size_t step) {
    std::vector<std::int32_t> column(size);
    for (std::size_t b = first_col; b < size; b += step) {
      component_walsh(s, static_cast<Element>(b), column);
      for (std::size_t a = 0; a < size; ++a) lat(a, b) = column[a];
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(size)));
  if (workers == 1) {
    fill(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(fill, w, workers);
  }
  return lat;
}

/// max |LAT(a, b)| over a != 0, b != 0, in full Walsh units.
inline std::int32_t max_abs_walsh(const Lat& lat) {
  std::int32_t best = 0;
  for (std::size_t a = 1; a < lat.side(); ++a) {
    auto row = lat.row(a);
    for (std::size_t b = 1; b < lat.side(); ++b) best = std::max(best, std::abs(row[b]));
  }
  return best;
}

/// Reported bias is half the Walsh extreme, so the AES S-box scores 16
/// and NL = 2^(n-1) - max_bias for permutations.
inline std::int32_t max_bias(const Lat& lat) { return max_abs_walsh(lat) / 2; }

struct NonlinearityStats {
  int nl = 0;  // min over the 2^n - 1 nonzero components
  int component_min = 0;
  int component_max = 0;
  Rational component_avg;
};

/// Column b of the LAT is the Walsh spectrum of b.S; the a = 0 entry is
/// included, which matters only for unbalanced components.
inline NonlinearityStats nonlinearity(const Lat& lat) {
  const std::int64_t half = static_cast<std::int64_t>(lat.side()) / 2;
  NonlinearityStats st;
  st.component_min = static_cast<int>(half);
  std::int64_t sum = 0;
  for (std::size_t b = 1; b < lat.side(); ++b) {
    std::int32_t peak = 0;
    for (std::size_t a = 0; a < lat.side(); ++a) peak = std::max(peak, std::abs(lat(a, b)));
    const int nl_b = static_cast<int>(half - peak / 2);
    st.component_min = std::min(st.component_min, nl_b);
    st.component_max = std::max(st.component_max, nl_b);
    sum += nl_b;
  }
  st.nl = st.component_min;
  st.component_avg = Rational(sum, static_cast<std::int64_t>(lat.side() - 1));
  return st;
}

inline NonlinearityStats nonlinearity(const SBox& s) { return nonlinearity(compute_lat(s)); }

// ---------------------------------------------------------------------------
// Avalanche criteria

struct SacReport {
  int bits = 0;
  // deviations[i * n + j] = | |A_ij| - 2^(n-1) |, input bit i, output bit j
  std::vector<std::int64_t> deviations;
  std::int64_t max_raw = 0;
  Rational max_norm;   // max_raw / 2^n
  Rational mean_norm;  // mean of all n^2 normalized deviations

  std::int64_t deviation(int input_bit, int output_bit) const {
    return deviations[static_cast<std::size_t>(input_bit * bits + output_bit)];
  }
};

inline SacReport dsac(const SBox& s) {
  const int n = s.bits();
  const std::size_t size = s.size();
  std::vector<std::int64_t> flips(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i) {
    const Element e = Element{1} << i;
    for (Element x = 0; x < size; ++x) {
      const Element d = s[x] ^ s[x ^ e];
      for (int j = 0; j < n; ++j) flips[static_cast<std::size_t>(i * n + j)] += (d >> j) & 1u;
    }
  }
  SacReport r;
  r.bits = n;
  r.deviations.resize(flips.size());
  const std::int64_t half = static_cast<std::int64_t>(size / 2);
  std::int64_t total = 0;
  for (std::size_t k = 0; k < flips.size(); ++k) {
    r.deviations[k] = std::abs(flips[k] - half);
    r.max_raw = std::max(r.max_raw, r.deviations[k]);
    total += r.deviations[k];
  }
  r.max_norm = Rational(r.max_raw, static_cast<std::int64_t>(size));
  r.mean_norm = Rational(total, static_cast<std::int64_t>(size) * n * n);
  return r;
}

struct BicEntry {
  int input_bit;
  int out_j;  // out_j < out_k
  int out_k;
  Rational deviation;  // |1/4 - p|
};

struct BicReport {
  int bits = 0;
  std::vector<BicEntry> deviations;  // ordered by (i, j, k)
  // |2^(n-2) - joint flip count|; max_norm = max_raw / 2^n
  std::int64_t max_raw = 0;
  Rational max_norm;
};

/// Output bits j and k both flip when input bit i flips.
inline BicReport dbic(const SBox& s) {
  const int n = s.bits();
  const std::size_t size = s.size();
  const std::int64_t quarter = static_cast<std::int64_t>(size / 4);
  BicReport r;
  r.bits = n;
  std::vector<std::int64_t> joint(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    std::fill(joint.begin(), joint.end(), 0);
    const Element e = Element{1} << i;
    for (Element x = 0; x < size; ++x) {
      const Element d = s[x] ^ s[x ^ e];
      for (int j = 0; j < n; ++j) {
        if (!((d >> j) & 1u)) continue;
        for (int k = j + 1; k < n; ++k) joint[static_cast<std::size_t>(j * n + k)] += (d >> k) & 1u;
      }
    }
    for (int j = 0; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const std::int64_t raw = std::abs(quarter - joint[static_cast<std::size_t>(j * n + k)]);
        r.max_raw = std::max(r.max_raw, raw);
        r.deviations.push_back({i, j, k, Rational(raw, static_cast<std::int64_t>(size))});
      }
    }
  }
  r.max_norm = Rational(r.max_raw, static_cast<std::int64_t>(size));
  return r;
}

// ---------------------------------------------------------------------------
// Searchable metrics

enum class Metric { du, max_bias, dsac, dbic, nl };

inline std::optional<Metric> parse_metric(std::string_view name) {
  if (name == "du") return Metric::du;
  if (name == "max_bias" || name == "max-bias") return Metric::max_bias;
  if (name == "dsac") return Metric::dsac;
  if (name == "dbic") return Metric::dbic;
  if (name == "nl") return Metric::nl;
  return std::nullopt;
}

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::du: return "du";
    case Metric::max_bias: return "max_bias";
    case Metric::dsac: return "dsac";
    case Metric::dbic: return "dbic";
    case Metric::nl: return "nl";
  }
  return "?";
}

/// nl is maximized; every other metric is minimized.
inline bool maximizes(Metric m) { return m == Metric::nl; }

/// Denominator turning a raw score into the normalized value.
inline std::int64_t metric_denominator(Metric m, int bits) {
  return (m == Metric::dsac || m == Metric::dbic) ? (std::int64_t{1} << bits) : 1;
}

/// Strict "better than" for the metric's direction.
inline bool is_better(Metric m, std::int64_t candidate, std::int64_t incumbent) {
  return maximizes(m) ? candidate > incumbent : candidate < incumbent;
}

/// Scratch buffers for evaluating one metric on many S-boxes of one width.
class MetricWorkspace {
 public:
  explicit MetricWorkspace(int bits) : bits_(bits), walsh_(std::size_t{1} << bits), counts_(std::size_t{1} << bits) {}

  /// Integer score; divide by metric_denominator() for the normalized value.
  /// Agrees exactly with the table-based functions above.
  std::int64_t score(const SBox& s, Metric m) {
    if (s.bits() != bits_) throw ConfigError("MetricWorkspace: width mismatch");
    switch (m) {
      case Metric::du: return score_du(s);
      case Metric::max_bias: return score_walsh(s, /*nonlinearity=*/false);
      case Metric::nl: return score_walsh(s, /*nonlinearity=*/true);
      case Metric::dsac: return dsac(s).max_raw;
      case Metric::dbic: return dbic(s).max_raw;
    }
    return 0;
  }

 private:
  std::int64_t score_du(const SBox& s) {
    const std::size_t size = s.size();
    std::uint32_t best = 0;
    for (Element a = 1; a < size; ++a) {
      std::fill(counts_.begin(), counts_.end(), 0u);
      for (Element x = 0; x < size; ++x) {
        const std::uint32_t c = ++counts_[s[x] ^ s[x ^ a]];
        if (c > best) best = c;
      }
    }
    return best;
  }

  std::int64_t score_walsh(const SBox& s, bool nonlinearity) {
    const std::size_t size = s.size();
    std::int32_t peak = 0;
    for (Element b = 1; b < size; ++b) {
      component_walsh(s, b, walsh_);
      for (std::size_t a = nonlinearity ? 0 : 1; a < size; ++a) peak = std::max(peak, std::abs(walsh_[a]));
    }
    if (nonlinearity) return static_cast<std::int64_t>(size / 2) - peak / 2;
    return peak / 2;
  }

  int bits_;
  std::vector<std::int32_t> walsh_;
  std::vector<std::uint32_t> counts_;
};

inline std::int64_t metric_score(const SBox& s, Metric m) {
  MetricWorkspace ws(s.bits());
  return ws.score(s, m);
}

inline Rational metric_value(const SBox& s, Metric m) {
  return Rational(metric_score(s, m), metric_denominator(m, s.bits()));
}

}  // namespace sboxlab
