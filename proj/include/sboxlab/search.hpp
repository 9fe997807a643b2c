#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "sboxlab/errors.hpp"
#include "sboxlab/metrics.hpp"
#include "sboxlab/random.hpp"
#include "sboxlab/rational.hpp"
#include "sboxlab/sbox.hpp"

namespace sboxlab {

struct NamedCycleSpec {
  std::string name;
  CycleSpec spec;
};

/// The five cycle types examined for 8-bit permutations.
inline std::vector<NamedCycleSpec> builtin_cycle_specs() {
  return {
      {"64x4", CycleSpec(std::vector<std::size_t>(64, 4))},
      {"16x16", CycleSpec(std::vector<std::size_t>(16, 16))},
      {"4x64", CycleSpec(std::vector<std::size_t>(4, 64))},
      {"256x1", CycleSpec({256})},
      {"rijndael", CycleSpec({59, 81, 87, 27, 2})},
  };
}

inline std::optional<CycleSpec> find_builtin_cycle_spec(std::string_view name) {
  for (auto& [n, spec] : builtin_cycle_specs()) {
    if (n == name) return spec;
  }
  return std::nullopt;
}

struct SearchConfig {
  int bits = 8;
  Metric metric = Metric::du;
  std::uint64_t tries = 1;
  std::uint64_t seed = 0;
  std::optional<CycleSpec> cycle_spec;
  unsigned workers = 1;
  // Record every candidate's score in enumeration order.
  bool keep_log = false;
  // Test hook: candidate k is replaced by injected[k] (the generator still
  // advances as usual).
  std::vector<SBox> injected;

  void validate() const {
    if (bits < kMinBits || bits > kMaxBits) throw ConfigError("search width must be in [2, 12]");
    if (tries < 1) throw ConfigError("tries must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (cycle_spec && cycle_spec->total() != (std::size_t{1} << bits)) {
      throw ConfigError("cycle spec sums to " + std::to_string(cycle_spec->total()) + ", expected " +
                        std::to_string(std::size_t{1} << bits));
    }
    for (const auto& s : injected) {
      if (s.bits() != bits) throw ConfigError("injected candidate has the wrong width");
    }
  }
};

struct SearchResult {
  SBox best_sbox = SBox::identity(kMinBits);
  std::int64_t best_score = 0;     // raw; value = best_score / denominator
  std::int64_t denominator = 1;
  std::int64_t score_sum = 0;      // exact sum over all candidates
  std::uint64_t best_index = 0;    // global candidate index of the best
  std::uint64_t tries = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  Metric metric = Metric::du;
  std::string generator_name;
  std::optional<CycleSpec> cycle_spec;
  std::chrono::duration<double> elapsed{};
  std::vector<std::int64_t> log;

  Rational best_value() const { return Rational(best_score, denominator); }
  Rational mean_value() const {
    return Rational(score_sum, denominator * static_cast<std::int64_t>(tries));
  }
};

namespace detail {

struct WorkerOutcome {
  std::optional<SBox> best;
  std::int64_t best_score = 0;
  std::uint64_t best_index = 0;
  std::int64_t sum = 0;
};

}  // namespace detail

/// Random search over (optionally cycle-constrained) permutations.
///
/// Candidate indices [0, tries) are split into contiguous chunks, one per
/// worker, so enumeration order is (worker, iteration). Worker w draws from
/// SeededRng(seed, w). The best is tracked with a strict comparison, so the
/// earliest candidate wins ties; the result is a pure function of
/// (config, workers).
inline SearchResult run_search(const SearchConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t size = std::size_t{1} << cfg.bits;
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(cfg.workers, cfg.tries));

  std::vector<detail::WorkerOutcome> outcomes(workers);
  std::vector<std::int64_t> log(cfg.keep_log ? cfg.tries : 0);

  auto chunk_begin = [&](unsigned w) { return cfg.tries / workers * w + std::min<std::uint64_t>(w, cfg.tries % workers); };

  auto run_worker = [&](unsigned w) {
    SeededRng rng(cfg.seed, w);
    MetricWorkspace ws(cfg.bits);
    detail::WorkerOutcome& out = outcomes[w];
    const std::uint64_t first = chunk_begin(w);
    const std::uint64_t last = chunk_begin(w + 1);
    for (std::uint64_t idx = first; idx < last; ++idx) {
      SBox candidate = cfg.cycle_spec ? random_permutation_with_cycles(rng, *cfg.cycle_spec)
                                      : random_permutation(rng, size);
      if (idx < cfg.injected.size()) candidate = cfg.injected[idx];
      const std::int64_t score = ws.score(candidate, cfg.metric);
      out.sum += score;
      if (cfg.keep_log) log[idx] = score;
      if (!out.best || is_better(cfg.metric, score, out.best_score)) {
        out.best = std::move(candidate);
        out.best_score = score;
        out.best_index = idx;
      }
    }
  };

  if (workers == 1) {
    run_worker(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_worker, w);
  }

  SearchResult r;
  r.tries = cfg.tries;
  r.seed = cfg.seed;
  r.workers = workers;
  r.metric = cfg.metric;
  r.denominator = metric_denominator(cfg.metric, cfg.bits);
  r.generator_name = std::string(SeededRng::kName);
  r.cycle_spec = cfg.cycle_spec;
  bool have_best = false;
  for (auto& out : outcomes) {
    r.score_sum += out.sum;
    if (!out.best) continue;
    if (!have_best || is_better(cfg.metric, out.best_score, r.best_score)) {
      r.best_sbox = *out.best;
      r.best_score = out.best_score;
      r.best_index = out.best_index;
      have_best = true;
    }
  }
  r.log = std::move(log);
  r.elapsed = std::chrono::steady_clock::now() - start;
  return r;
}

}  // namespace sboxlab
