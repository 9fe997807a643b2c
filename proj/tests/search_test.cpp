#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "sboxlab/bundled.hpp"
#include "sboxlab/search.hpp"

using namespace sboxlab;

namespace {

SearchConfig small_config(Metric m, std::uint64_t tries, std::uint64_t seed) {
  SearchConfig cfg;
  cfg.metric = m;
  cfg.tries = tries;
  cfg.seed = seed;
  return cfg;
}

void expect_within_sigma(const std::map<std::vector<Element>, std::uint64_t>& counts, std::size_t outcomes,
                         std::uint64_t draws, double sigmas) {
  ASSERT_EQ(counts.size(), outcomes);
  const double p = 1.0 / static_cast<double>(outcomes);
  const double mean = static_cast<double>(draws) * p;
  const double sd = std::sqrt(static_cast<double>(draws) * p * (1 - p));
  for (const auto& [perm, c] : counts) EXPECT_LT(std::abs(static_cast<double>(c) - mean), sigmas * sd);
}

}  // namespace

TEST(SeededRng, DeterministicAndStreamSeparated) {
  SeededRng a(42), b(42), c(42, 1), d(43);
  bool differs_stream = false, differs_seed = false;
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next();
    EXPECT_EQ(va, b.next());
    differs_stream |= va != c.next();
    differs_seed |= va != d.next();
  }
  EXPECT_TRUE(differs_stream);
  EXPECT_TRUE(differs_seed);
}

TEST(SeededRng, BelowStaysInRange) {
  SeededRng rng(1);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_NEAR(h, 10000, 500);
  EXPECT_EQ(rng.below(1), 0u);
}

TEST(RandomPermutation, UniformOverAllPermutationsOfFour) {
  SeededRng rng(2024);
  std::map<std::vector<Element>, std::uint64_t> counts;
  const std::uint64_t draws = 240000;
  for (std::uint64_t i = 0; i < draws; ++i) {
    const SBox p = random_permutation(rng, 4);
    ++counts[std::vector<Element>(p.table().begin(), p.table().end())];
  }
  expect_within_sigma(counts, 24, draws, 5.0);
}

TEST(RandomPermutation, UniformPositionsAtThreeBits) {
  SeededRng rng(7);
  std::vector<std::uint64_t> hits(64, 0);
  const std::uint64_t draws = 100000;
  for (std::uint64_t i = 0; i < draws; ++i) {
    const SBox s = random_permutation(rng, 8);
    ASSERT_TRUE(is_bijective(s));
    for (Element x = 0; x < 8; ++x) ++hits[x * 8 + s[x]];
  }
  const double mean = draws / 8.0, sd = std::sqrt(draws * (1.0 / 8) * (7.0 / 8));
  for (auto h : hits) EXPECT_LT(std::abs(static_cast<double>(h) - mean), 5 * sd);
}

TEST(CycleConstrained, UniformWithinCycleType) {
  struct Case {
    std::vector<std::size_t> lengths;
    std::size_t outcomes;
  };
  // (2,2): 3 permutations; (4): 3! = 6; (3,1): 8
  for (const Case& c : {Case{{2, 2}, 3}, Case{{4}, 6}, Case{{3, 1}, 8}}) {
    SeededRng rng(c.outcomes);
    std::map<std::vector<Element>, std::uint64_t> counts;
    const std::uint64_t draws = 60000;
    for (std::uint64_t i = 0; i < draws; ++i) {
      const SBox p = random_permutation_with_cycles(rng, CycleSpec(c.lengths));
      ++counts[std::vector<Element>(p.table().begin(), p.table().end())];
    }
    expect_within_sigma(counts, c.outcomes, draws, 5.0);
  }
}

TEST(CycleConstrained, EveryBuiltinSpecIsRealized) {
  for (const auto& [name, spec] : builtin_cycle_specs()) {
    EXPECT_EQ(spec.total(), 256u) << name;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      SeededRng rng(seed);
      const SBox s = random_permutation_with_cycles(rng, spec);
      ASSERT_TRUE(is_bijective(s));
      ASSERT_EQ(cycle_decomposition(s).sorted_lengths(), spec.sorted()) << name << " seed " << seed;
    }
  }
}

TEST(CycleConstrained, BuiltinLookup) {
  EXPECT_EQ(find_builtin_cycle_spec("rijndael")->sorted(), (std::vector<std::size_t>{2, 27, 59, 81, 87}));
  EXPECT_EQ(find_builtin_cycle_spec("256x1")->lengths(), std::vector<std::size_t>{256});
  EXPECT_FALSE(find_builtin_cycle_spec("8x32").has_value());
}

TEST(CycleSpecParse, ValidAndInvalid) {
  EXPECT_EQ(CycleSpec::parse("59,81,87,27,2").lengths(), (std::vector<std::size_t>{59, 81, 87, 27, 2}));
  EXPECT_EQ(CycleSpec::parse("128 128").total(), 256u);
  EXPECT_EQ(CycleSpec::parse("4,4").to_string(), "4,4");
  EXPECT_THROW(CycleSpec::parse("4,x"), ConfigError);
  EXPECT_THROW(CycleSpec::parse(""), ConfigError);
  EXPECT_THROW(CycleSpec::parse("0,4"), ConfigError);
  SeededRng rng(0);
  EXPECT_THROW(random_permutation_with_cycles(rng, CycleSpec::parse("100,100")), ConfigError);
}

TEST(Search, MatchesManualEnumeration) {
  const std::uint64_t tries = 40, seed = 9;
  for (unsigned workers : {1u, 3u}) {
    SearchConfig cfg = small_config(Metric::nl, tries, seed);
    cfg.workers = workers;
    cfg.keep_log = true;
    const SearchResult r = run_search(cfg);

    std::vector<std::int64_t> expected;
    const std::uint64_t per = tries / workers, extra = tries % workers;
    for (unsigned w = 0; w < workers; ++w) {
      SeededRng rng(seed, w);
      const std::uint64_t count = per + (w < extra ? 1 : 0);
      for (std::uint64_t k = 0; k < count; ++k) expected.push_back(metric_score(random_permutation(rng, 256), Metric::nl));
    }
    EXPECT_EQ(r.log, expected);
    EXPECT_EQ(r.score_sum, std::accumulate(expected.begin(), expected.end(), std::int64_t{0}));
    const auto best = std::max_element(expected.begin(), expected.end());  // first maximum
    EXPECT_EQ(r.best_score, *best);
    EXPECT_EQ(r.best_index, static_cast<std::uint64_t>(best - expected.begin()));
    EXPECT_EQ(metric_score(r.best_sbox, Metric::nl), r.best_score);
  }
}

TEST(Search, DeterministicForFixedConfig) {
  SearchConfig cfg = small_config(Metric::du, 60, 123);
  cfg.workers = 4;
  const SearchResult a = run_search(cfg);
  const SearchResult b = run_search(cfg);
  EXPECT_EQ(a.best_sbox, b.best_sbox);
  EXPECT_EQ(a.score_sum, b.score_sum);
  EXPECT_EQ(a.best_index, b.best_index);
  cfg.seed = 124;
  EXPECT_NE(run_search(cfg).best_sbox, a.best_sbox);
}

TEST(Search, SingleTry) {
  const SearchResult r = run_search(small_config(Metric::dsac, 1, 5));
  SeededRng rng(5, 0);
  const SBox expected = random_permutation(rng, 256);
  EXPECT_EQ(r.best_sbox, expected);
  EXPECT_EQ(r.best_index, 0u);
  EXPECT_EQ(r.best_value(), r.mean_value());
  EXPECT_EQ(r.best_value(), dsac(expected).max_norm);
}

TEST(Search, MeanTimesTriesIsSum) {
  for (Metric m : {Metric::du, Metric::max_bias, Metric::dsac, Metric::dbic, Metric::nl}) {
    SearchConfig cfg = small_config(m, 30, 77);
    cfg.keep_log = true;
    cfg.workers = 2;
    const SearchResult r = run_search(cfg);
    EXPECT_EQ(r.mean_value() * Rational(30), Rational(r.score_sum, r.denominator));
    for (auto v : r.log) EXPECT_FALSE(is_better(m, v, r.best_score));
  }
}

TEST(Search, CandidatesAreBijectiveWithRequestedCycles) {
  SearchConfig cfg = small_config(Metric::du, 20, 3);
  cfg.cycle_spec = find_builtin_cycle_spec("16x16");
  const SearchResult r = run_search(cfg);
  EXPECT_TRUE(is_bijective(r.best_sbox));
  EXPECT_EQ(cycle_decomposition(r.best_sbox).sorted_lengths(), std::vector<std::size_t>(16, 16));
}

TEST(Search, InjectedAesWinsNonlinearity) {
  SearchConfig cfg = small_config(Metric::nl, 50, 1);
  cfg.injected = {SBox::identity(8), SBox::identity(8), aes_sbox()};
  const SearchResult r = run_search(cfg);
  EXPECT_GE(r.best_score, 112);
  EXPECT_EQ(r.best_index, 2u);
  EXPECT_EQ(r.best_sbox, aes_sbox());
}

TEST(Search, TiesKeepTheEarliestCandidate) {
  SearchConfig cfg = small_config(Metric::du, 10, 1);
  cfg.injected = std::vector<SBox>(10, aes_sbox());
  cfg.workers = 3;
  const SearchResult r = run_search(cfg);
  EXPECT_EQ(r.best_index, 0u);
  EXPECT_EQ(r.best_score, 4);
}

TEST(Search, ConfigErrors) {
  SearchConfig cfg = small_config(Metric::du, 0, 1);
  EXPECT_THROW(run_search(cfg), ConfigError);
  cfg.tries = 1;
  cfg.cycle_spec = CycleSpec::parse("100,100");
  EXPECT_THROW(run_search(cfg), ConfigError);
  cfg.cycle_spec.reset();
  cfg.workers = 0;
  EXPECT_THROW(run_search(cfg), ConfigError);
  cfg.workers = 1;
  cfg.bits = 13;
  EXPECT_THROW(run_search(cfg), ConfigError);
}

TEST(Search, OtherWidths) {
  SearchConfig cfg = small_config(Metric::du, 200, 11);
  cfg.bits = 4;
  const SearchResult r = run_search(cfg);
  EXPECT_EQ(r.best_sbox.bits(), 4);
  EXPECT_EQ(r.best_score, 4);  // optimal 4-bit permutations are common
}
