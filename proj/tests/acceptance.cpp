// Acceptance gate. `acceptance` runs every criterion, `acceptance N` runs
// one. Each prints a single [PASS]/[FAIL] line; exit status is nonzero if
// any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "sboxlab/sboxlab.hpp"
#include "test_oracles.hpp"

using namespace sboxlab;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

unsigned all_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::optional<SBox> load_appendix(const std::string& name) {
  const auto path = std::filesystem::path(SBOXLAB_DATA_DIR) / "appendix" / (name + ".txt");
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_sbox(ss.str());
}

struct AppendixRow {
  const char* name;
  std::uint32_t du;
  std::int32_t max_bias;
  Rational dsac;
  Rational dbic;
  int nl;
};

const AppendixRow kAppendixRows[] = {
    {"DSAC_Random", 10, 34, Rational(1, 16), Rational(11, 128), 94},
    {"DBIC_Rij_Cyc", 12, 36, Rational(3, 32), Rational(1, 16), 92},
    {"NL_64_4", 10, 30, Rational(7, 32), Rational(11, 64), 98},
};

Outcome aes_exact_metrics() {
  const auto t0 = Clock::now();
  const MetricReport r = full_report(aes_sbox(), {.name = "AES"});
  const double secs = seconds_since(t0);
  const bool ok = r.du == 4 && r.max_bias == 16 && r.nl.nl == 112 && r.dsac.max_norm.to_decimal() == "0.0625" &&
                  r.dsac.max_raw == 16 && r.dsac.mean_norm.to_decimal() == "0.0263671875" &&
                  r.dbic.max_norm.to_decimal() == "0.0703125" && secs < 1.0;
  std::ostringstream os;
  os << "DU=" << r.du << " MAX_BIAS=" << r.max_bias << " NL=" << r.nl.nl << " DSAC=" << r.dsac.max_norm.to_decimal()
     << " (raw " << r.dsac.max_raw << ") DSAC_mean=" << r.dsac.mean_norm.to_decimal()
     << " DBIC=" << r.dbic.max_norm.to_decimal() << " in " << fmt(secs, 3) << "s";
  return {ok, os.str()};
}

Outcome aes_cycles() {
  const CycleStructure c = cycle_decomposition(aes_sbox());
  std::size_t fixed = 0, opposite = 0;
  const SBox s = aes_sbox();
  for (Element x = 0; x < 256; ++x) {
    fixed += s[x] == x;
    opposite += s[x] == (x ^ 0xFF);
  }
  const auto lengths = c.sorted_lengths();
  const bool ok = lengths == std::vector<std::size_t>{2, 27, 59, 81, 87} && fixed == 0 && opposite == 0 &&
                  c.fixed_points == 0 && c.opposite_fixed_points == 0;
  std::ostringstream os;
  os << "cycles {";
  for (std::size_t i = 0; i < lengths.size(); ++i) os << (i ? ", " : "") << lengths[i];
  os << "} fixed=" << fixed << " opposite_fixed=" << opposite;
  return {ok, os.str()};
}

Outcome dillon_apn() {
  const auto t0 = Clock::now();
  const SBox s = dillon_apn_permutation();
  const bool bij = is_bijective(s);
  const std::uint32_t du = differential_uniformity(compute_ddt(s));
  const double secs = seconds_since(t0);
  return {s.bits() == 6 && bij && du == 2 && secs < 0.1,
          "n=" + std::to_string(s.bits()) + " bijective=" + (bij ? "yes" : "no") + " DU=" + std::to_string(du) +
              " in " + fmt(secs * 1000, 2) + "ms"};
}

Outcome power_maps() {
  const GFContext f8(8, 0x11B);
  const std::uint32_t gold = differential_uniformity(compute_ddt(build_monomial_sbox(f8, {MonomialFamily::gold, 1})));
  const GFContext f7(7);
  const std::uint64_t e = monomial_exponent({MonomialFamily::inverse, 0}, 7);
  const std::uint32_t inv = differential_uniformity(compute_ddt(build_monomial_sbox(f7, e)));
  return {gold == 2 && e == 63 && inv == 2,
          "x^3 over GF(2^8) DU=" + std::to_string(gold) + ", x^" + std::to_string(e) +
              " over GF(2^7) DU=" + std::to_string(inv)};
}

Outcome appendix_rows() {
  bool ok = true;
  std::ostringstream os;
  for (const AppendixRow& row : kAppendixRows) {
    const auto s = load_appendix(row.name);
    if (!s) {
      ok = false;
      os << row.name << ": missing data/appendix/" << row.name << ".txt; ";
      continue;
    }
    const MetricReport r = full_report(*s, {.name = row.name});
    const bool match = r.du == row.du && r.max_bias == row.max_bias && r.dsac.max_norm == row.dsac &&
                       r.dbic.max_norm == row.dbic && r.nl.nl == row.nl;
    ok &= match;
    os << row.name << ": " << to_csv_row(r) << (match ? " ok; " : " MISMATCH; ");
  }
  return {ok, os.str()};
}

Outcome search_statistics() {
  const auto t0 = Clock::now();
  auto mean_of = [](Metric m) {
    SearchConfig cfg;
    cfg.metric = m;
    cfg.tries = 10000;
    cfg.seed = 20240601;
    cfg.workers = all_workers();
    return run_search(cfg).mean_value().to_double();
  };
  const double du = mean_of(Metric::du);
  const double nl = mean_of(Metric::nl);
  const double bias = mean_of(Metric::max_bias);
  const bool ok = std::abs(du - 11.35) <= 0.3 && std::abs(nl - 92.77) <= 1.0 && std::abs(bias - 35.28) <= 1.0;
  return {ok, "10000 tries: mean DU=" + fmt(du) + " (11.35+-0.3) NL=" + fmt(nl) + " (92.77+-1.0) MAX_BIAS=" +
                  fmt(bias) + " (35.28+-1.0) in " + fmt(seconds_since(t0), 1) + "s"};
}

Outcome constrained_search() {
  std::size_t failures = 0, total = 0;
  for (const auto& [name, spec] : builtin_cycle_specs()) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      SeededRng rng(seed);
      const SBox s = random_permutation_with_cycles(rng, spec);
      ++total;
      if (!is_bijective(s) || cycle_decomposition(s).sorted_lengths() != spec.sorted()) ++failures;
    }
  }
  return {failures == 0, std::to_string(total) + " candidates over 5 specs, " + std::to_string(failures) + " failures"};
}

Outcome spn_avalanche() {
  const auto pairs = generate_trial_pairs(10000, 424242);
  auto distances = [&](const SBox& s) {
    std::array<double, 3> d{};
    const int rounds[3] = {4, 6, 12};
    for (int k = 0; k < 3; ++k) {
      SpnConfig cfg;
      cfg.sbox = s;
      cfg.rounds = rounds[k];
      d[static_cast<std::size_t>(k)] = avalanche_experiment(cfg, pairs, all_workers()).distance_from_32().to_double();
    }
    return d;
  };
  std::ostringstream os;
  const auto aes = distances(aes_sbox());
  bool ok = aes[2] < 0.05 && aes[0] > aes[2] && aes[0] > aes[1] && aes[1] > aes[2];
  os << "AES 4/6/12 rounds: " << fmt(aes[0], 6) << " " << fmt(aes[1], 6) << " " << fmt(aes[2], 6) << "; ";
  for (const AppendixRow& row : kAppendixRows) {
    const auto s = load_appendix(row.name);
    if (!s) {
      ok = false;
      os << row.name << ": missing; ";
      continue;
    }
    const auto d = distances(*s);
    const bool ordered = d[0] > d[1] && d[1] > d[2];
    ok &= ordered;
    os << row.name << ": " << fmt(d[0], 6) << " " << fmt(d[1], 6) << " " << fmt(d[2], 6)
       << (ordered ? "; " : " (order broken); ");
  }
  return {ok, os.str()};
}

Outcome oracle_equivalence() {
  std::size_t mismatches = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SeededRng rng(seed, 9);
    const SBox s = random_permutation(rng, 16);
    if (compute_lat(s) != oracle::naive_lat(s)) ++mismatches;
  }
  SeededRng probe(1000);
  const SBox big = random_permutation(probe, 256);
  const Lat lat = compute_lat(big);
  for (int k = 0; k < 1000; ++k) {
    const auto a = static_cast<Element>(probe.below(256));
    const auto b = static_cast<Element>(probe.below(256));
    if (lat(a, b) != oracle::lat_entry(big, a, b)) ++mismatches;
  }
  std::size_t ddt_mismatches = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SeededRng rng(seed, 10);
    const SBox s = random_permutation(rng, 256);
    const Ddt d = compute_ddt(s);
    for (Element a = 0; a < 256; ++a)
      for (Element b = 0; b < 256; ++b) ddt_mismatches += d(a, b) != oracle::ddt_entry(s, a, b);
  }
  return {mismatches == 0 && ddt_mismatches == 0,
          "LAT mismatches " + std::to_string(mismatches) + " (100 4-bit tables + 1000 8-bit probes), DDT mismatches " +
              std::to_string(ddt_mismatches) + " (100 8-bit tables)"};
}

Outcome invariants() {
  std::vector<std::string> broken;
  SeededRng rng(314);
  for (int trial = 0; trial < 20; ++trial) {
    const SBox s = random_permutation(rng, 256);
    const Ddt d = compute_ddt(s);
    const Lat lat = compute_lat(s);
    for (std::size_t a = 0; a < 256; ++a) {
      std::uint64_t row = 0;
      std::int64_t energy = 0;
      for (std::size_t b = 0; b < 256; ++b) {
        if (d(a, b) % 2) broken.push_back("DDT evenness");
        row += d(a, b);
        energy += std::int64_t{lat(b, a)} * lat(b, a);
      }
      if (row != 256) broken.push_back("DDT row sum");
      if (energy != 65536) broken.push_back("LAT Parseval");
      if (a != 0 && lat(a, 0) != 0) broken.push_back("LAT[a,0]");
    }
  }
  for (int n = 1; n <= 12; ++n) {
    TruthTable t{n, std::vector<std::uint8_t>(std::size_t{1} << n)};
    for (auto& b : t.bits) b = static_cast<std::uint8_t>(rng.below(2));
    if (evaluate_anf(mobius_transform(t)) != t) broken.push_back("Moebius involution");
  }
  const SpnCipher cipher{SpnConfig{}};
  for (int trial = 0; trial < 10000; ++trial) {
    Block p{}, k{};
    for (auto& v : p) v = static_cast<std::uint8_t>(rng.below(256));
    for (auto& v : k) v = static_cast<std::uint8_t>(rng.below(256));
    const RoundKeys keys = cipher.round_keys(k);
    if (cipher.decrypt(cipher.encrypt(p, keys), keys) != p) {
      broken.push_back("round trip");
      break;
    }
  }
  const RoundKeys k1 = key_schedule(Block{}, 1, key_schedule_sbox());
  if (k1.at(0) != Block{1, 0, 0, 0, 0, 0, 0, 0}) broken.push_back("k_1 golden value");
  std::string detail = broken.empty() ? "DDT, LAT, Moebius, round-trip (10^4) and key-schedule checks hold"
                                      : "broken: " + broken.front() + " (+" + std::to_string(broken.size() - 1) + ")";
  return {broken.empty(), detail};
}

Outcome heatmap() {
  const SBox s = aes_sbox();
  const Lat lat = compute_lat(s);
  const Heatmap h = render_heatmap(lat_bias_table(lat), HeatmapSpec{36});
  std::ostringstream ppm;
  write_ppm(ppm, h);
  std::istringstream header(ppm.str());
  std::string magic;
  int w = 0, hgt = 0, maxval = 0;
  header >> magic >> w >> hgt >> maxval;

  // independent scan on the naive LAT
  const Lat naive = oracle::naive_lat(s);
  std::size_t expected = 0, agree = 0;
  for (std::size_t a = 1; a < 256; ++a) {
    for (std::size_t b = 1; b < 256; ++b) {
      const bool extreme = std::abs(naive(a, b)) == 32;
      expected += extreme;
      agree += extreme == (h.marked[a * 256 + b] != 0);
    }
  }
  std::stringstream csv;
  write_table_csv(csv, lat);
  const bool round_trip = read_table_csv<std::int32_t>(csv) == lat;
  const bool ok = magic == "P6" && w == 256 && hgt == 256 && maxval == 255 && h.marker_count == expected &&
                  agree == 255u * 255u && round_trip;
  return {ok, std::to_string(w) + "x" + std::to_string(hgt) + " image, " + std::to_string(h.marker_count) +
                  " markers vs " + std::to_string(expected) + " independent, CSV round-trip " +
                  (round_trip ? "ok" : "broken")};
}

const std::vector<std::pair<const char*, std::function<Outcome()>>> kCriteria = {
    {"AES exact metrics", aes_exact_metrics},
    {"AES cycle structure", aes_cycles},
    {"Dillon 6-bit APN permutation", dillon_apn},
    {"Gold and inverse power maps are APN", power_maps},
    {"Appendix S-box metric rows", appendix_rows},
    {"Unconstrained search statistics", search_statistics},
    {"Cycle-constrained generation", constrained_search},
    {"SPN avalanche", spn_avalanche},
    {"Oracle equivalence", oracle_equivalence},
    {"Invariant suites", invariants},
    {"LAT heatmap", heatmap},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> which;
  if (argc > 1) {
    const int k = std::atoi(argv[1]);
    if (k < 1 || k > static_cast<int>(kCriteria.size())) {
      std::cerr << "usage: acceptance [1-" << kCriteria.size() << "]\n";
      return 2;
    }
    which.push_back(static_cast<std::size_t>(k));
  } else {
    for (std::size_t k = 1; k <= kCriteria.size(); ++k) which.push_back(k);
  }
  int failed = 0;
  for (std::size_t k : which) {
    const auto& [title, run] = kCriteria[k - 1];
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (out.pass ? "[PASS]" : "[FAIL]") << " criterion " << k << ": " << title << " -- " << out.detail
              << std::endl;
    failed += !out.pass;
  }
  return failed ? 1 : 0;
}
