#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sboxlab/anf.hpp"
#include "sboxlab/metrics.hpp"
#include "sboxlab/sbox.hpp"
#include "sboxlab/search.hpp"
#include "sboxlab/spn.hpp"

namespace sboxlab {

using Json = nlohmann::ordered_json;

struct ReportOptions {
  std::string name = "sbox";
  bool with_degree = false;
  bool with_ai = false;
  AiScope ai_scope = AiScope::coordinates;
  unsigned workers = 1;
};

struct CycleSummary {
  std::vector<std::size_t> lengths;  // ascending
  std::size_t fixed_points = 0;
  std::size_t opposite_fixed_points = 0;
};

/// One row of the metric comparison table plus supporting detail.
struct MetricReport {
  std::string name;
  int bits = 0;
  bool bijective = false;
  std::uint32_t du = 0;
  std::size_t du_count = 0;
  std::int32_t max_bias = 0;   // half units
  std::int32_t max_walsh = 0;  // full Walsh units, = 2 * max_bias
  NonlinearityStats nl;
  SacReport dsac;
  BicReport dbic;
  std::optional<CycleSummary> cycles;  // permutations only
  std::optional<int> degree;
  std::optional<int> algebraic_immunity;
  AiScope ai_scope = AiScope::coordinates;
};

inline MetricReport full_report(const SBox& s, const ReportOptions& opt = {}) {
  MetricReport r;
  r.name = opt.name;
  r.bits = s.bits();
  r.bijective = is_bijective(s);
  const Ddt ddt = compute_ddt(s);
  r.du = differential_uniformity(ddt);
  r.du_count = du_max_count(ddt);
  const Lat lat = compute_lat(s, opt.workers);
  r.max_walsh = max_abs_walsh(lat);
  r.max_bias = max_bias(lat);
  r.nl = nonlinearity(lat);
  r.dsac = dsac(s);
  r.dbic = dbic(s);
  if (r.bijective) {
    const CycleStructure cs = cycle_decomposition(s);
    r.cycles = CycleSummary{cs.sorted_lengths(), cs.fixed_points, cs.opposite_fixed_points};
  }
  if (opt.with_degree) r.degree = algebraic_degree(s);
  if (opt.with_ai) {
    r.algebraic_immunity = sbox_algebraic_immunity(s, opt.ai_scope);
    r.ai_scope = opt.ai_scope;
  }
  return r;
}

inline Json to_json(const MetricReport& r) {
  Json j;
  j["name"] = r.name;
  j["n"] = r.bits;
  j["bijective"] = r.bijective;
  j["du"] = r.du;
  j["du_count"] = r.du_count;
  j["max_bias"] = r.max_bias;
  j["max_walsh"] = r.max_walsh;
  j["nl"] = r.nl.nl;
  j["nl_component_min"] = r.nl.component_min;
  j["nl_component_max"] = r.nl.component_max;
  j["nl_component_avg"] = r.nl.component_avg.to_decimal();
  j["dsac"] = Json{{"max", r.dsac.max_norm.to_decimal()},
                   {"max_raw", r.dsac.max_raw},
                   {"mean", r.dsac.mean_norm.to_decimal()}};
  j["dbic"] = Json{{"max", r.dbic.max_norm.to_decimal()}, {"max_raw", r.dbic.max_raw}};
  if (r.cycles) {
    j["cycles"] = Json{{"count", r.cycles->lengths.size()},
                       {"lengths", r.cycles->lengths},
                       {"fixed_points", r.cycles->fixed_points},
                       {"opposite_fixed_points", r.cycles->opposite_fixed_points}};
  }
  if (r.degree) j["degree"] = *r.degree;
  if (r.algebraic_immunity) {
    j["algebraic_immunity"] = *r.algebraic_immunity;
    j["ai_scope"] = std::string(to_string(r.ai_scope));
  }
  return j;
}

inline constexpr const char* kMetricCsvHeader = "name,DU,MAX BIAS,DSAC,DBIC,NL";

inline std::string to_csv_row(const MetricReport& r) {
  std::ostringstream os;
  os << r.name << ',' << r.du << ',' << r.max_bias << ',' << r.dsac.max_norm.to_decimal() << ','
     << r.dbic.max_norm.to_decimal() << ',' << r.nl.nl;
  return os.str();
}

inline Json to_json(const SearchResult& r) {
  Json j;
  j["metric"] = std::string(to_string(r.metric));
  j["direction"] = maximizes(r.metric) ? "maximize" : "minimize";
  j["tries"] = r.tries;
  j["seed"] = r.seed;
  j["workers"] = r.workers;
  j["generator"] = r.generator_name;
  j["cycle_spec"] = r.cycle_spec ? Json(r.cycle_spec->lengths()) : Json(nullptr);
  j["best_value"] = r.best_value().to_decimal();
  j["best_raw"] = r.best_score;
  j["best_index"] = r.best_index;
  j["mean"] = r.mean_value().to_decimal();
  j["mean_exact"] = r.mean_value().to_fraction();
  j["best_sbox"] = format_sbox(r.best_sbox);
  j["metadata"] = Json{{"elapsed_seconds", r.elapsed.count()}};
  return j;
}

inline Json to_json(const AvalancheReport& r, const std::string& name) {
  Json j;
  j["name"] = name;
  j["rounds"] = r.rounds;
  j["trials"] = r.trials;
  j["mean_flips"] = r.mean_flips().to_decimal();
  j["distance_from_32"] = r.distance_from_32().to_decimal();
  j["mean_abs_deviation"] = r.mean_abs_deviation().to_decimal();
  std::vector<std::string> per_bit;
  for (int b = 0; b < 64; ++b) per_bit.push_back(r.per_bit_mean(b).to_decimal());
  j["per_input_bit_means"] = per_bit;
  return j;
}

inline constexpr const char* kAvalancheCsvHeader = "sbox,rounds,distance_from_32";

inline std::string to_csv_row(const AvalancheReport& r, const std::string& name) {
  return name + "," + std::to_string(r.rounds) + "," + r.distance_from_32().to_decimal();
}

}  // namespace sboxlab
