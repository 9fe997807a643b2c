// sboxlab: S-box analysis, search and SPN avalanche command line.
//
// Exit codes: 0 success, 2 input parse error, 3 invalid configuration,
// 4 precondition violation.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "sboxlab/sboxlab.hpp"

namespace {

using namespace sboxlab;

constexpr int kExitParse = 2;
constexpr int kExitConfig = 3;
constexpr int kExitPrecondition = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
}

SBox load_sbox(const std::string& path, int base) { return parse_sbox(read_file(path), base); }

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct AnalyzeArgs {
  std::string input;
  int base = 10;
  std::string name;
  bool with_degree = false;
  bool with_ai = false;
  std::string ai_scope = "coordinates";
  std::string format = "json";
  std::string output;
};

int cmd_analyze(const AnalyzeArgs& a) {
  const SBox s = load_sbox(a.input, a.base);
  ReportOptions opt;
  opt.name = a.name.empty() ? std::filesystem::path(a.input).stem().string() : a.name;
  opt.with_degree = a.with_degree;
  opt.with_ai = a.with_ai;
  opt.ai_scope = a.ai_scope == "components" ? AiScope::components : AiScope::coordinates;
  opt.workers = default_workers();
  const MetricReport r = full_report(s, opt);
  if (a.format == "csv") {
    write_output(a.output, std::string(kMetricCsvHeader) + "\n" + to_csv_row(r) + "\n");
  } else {
    write_output(a.output, to_json(r).dump(2) + "\n");
  }
  if (!r.bijective) std::cerr << "note: input is not a permutation (bijective=false)\n";
  return 0;
}

struct GenArgs {
  std::string family;
  std::uint64_t i = 1;
  std::uint64_t e = 0;
  int n = 8;
  std::string irreducible;
  std::string output;
};

int cmd_gen(const GenArgs& a) {
  const auto family = parse_monomial_family(a.family);
  if (!family) throw ConfigError("unknown family '" + a.family + "'");
  MonomialParams p{*family, *family == MonomialFamily::raw ? a.e : a.i};
  const GFContext ctx = a.irreducible.empty()
                            ? GFContext(a.n)
                            : GFContext(a.n, static_cast<std::uint32_t>(std::stoul(a.irreducible, nullptr, 0)));
  write_output(a.output, format_sbox(build_monomial_sbox(ctx, p)));
  return 0;
}

struct SearchArgs {
  std::string metric;
  std::uint64_t tries = 0;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::string cycles = "none";
  int n = 8;
  std::string output;
  std::string log;
};

int cmd_search(const SearchArgs& a) {
  SearchConfig cfg;
  const auto metric = parse_metric(a.metric);
  if (!metric) throw ConfigError("unknown metric '" + a.metric + "'");
  cfg.metric = *metric;
  cfg.bits = a.n;
  cfg.tries = a.tries;
  cfg.seed = a.seed;
  cfg.workers = a.workers ? a.workers : default_workers();
  cfg.keep_log = !a.log.empty();
  if (a.cycles != "none") {
    if (auto builtin = find_builtin_cycle_spec(a.cycles)) {
      cfg.cycle_spec = *builtin;
    } else {
      cfg.cycle_spec = CycleSpec::parse(a.cycles);
    }
  }
  const SearchResult r = run_search(cfg);
  Json j = to_json(r);
  j["n"] = a.n;
  j["cycles"] = a.cycles;
  write_output(a.output, j.dump(2) + "\n");
  if (!a.log.empty()) {
    std::ostringstream os;
    os << "index,score\n";
    for (std::size_t k = 0; k < r.log.size(); ++k) {
      os << k << ',' << Rational(r.log[k], r.denominator).to_decimal() << '\n';
    }
    write_output(a.log, os.str());
  }
  if (!a.output.empty() && a.output != "-") {
    std::cout << "best " << to_string(r.metric) << " = " << r.best_value().to_decimal() << ", mean = "
              << r.mean_value().to_decimal() << " over " << r.tries << " tries\n";
  }
  return 0;
}

struct AvalancheArgs {
  std::string sbox;
  int base = 10;
  int rounds = 4;
  std::uint64_t trials = 10000;
  std::optional<std::uint64_t> seed;
  std::string pairs;
  std::string dump_pairs;
  unsigned workers = 0;
  std::string name;
  std::string format = "json";
  std::string output;
};

int cmd_avalanche(const AvalancheArgs& a) {
  SpnConfig cfg;
  cfg.sbox = load_sbox(a.sbox, a.base);
  cfg.rounds = a.rounds;
  cfg.validate();
  std::vector<TrialPair> pairs;
  if (!a.pairs.empty()) {
    pairs = read_trial_pairs(a.pairs);
  } else {
    if (!a.seed) throw ConfigError("--seed is required unless --pairs is given");
    pairs = generate_trial_pairs(a.trials, *a.seed);
  }
  if (!a.dump_pairs.empty()) write_trial_pairs(a.dump_pairs, pairs);
  const AvalancheReport r = avalanche_experiment(cfg, pairs, a.workers ? a.workers : default_workers());
  const std::string name = a.name.empty() ? std::filesystem::path(a.sbox).stem().string() : a.name;
  if (a.format == "csv") {
    write_output(a.output, std::string(kAvalancheCsvHeader) + "\n" + to_csv_row(r, name) + "\n");
  } else {
    write_output(a.output, to_json(r, name).dump(2) + "\n");
  }
  return 0;
}

struct HeatmapArgs {
  std::string sbox;
  int base = 10;
  std::string table = "lat";
  std::optional<std::int64_t> scale;
  std::string output;
  std::string csv;
};

int cmd_heatmap(const HeatmapArgs& a) {
  const SBox s = load_sbox(a.sbox, a.base);
  HeatmapSpec spec;
  spec.scale = a.scale;
  Heatmap h;
  std::ostringstream csv;
  if (a.table == "ddt") {
    const Ddt ddt = compute_ddt(s);
    h = render_heatmap(ddt, spec);
    write_table_csv(csv, ddt);
  } else {
    const Lat lat = compute_lat(s, default_workers());
    h = render_heatmap(lat_bias_table(lat), spec);
    write_table_csv(csv, lat);
  }
  std::ofstream img(a.output, std::ios::binary);
  if (!img) throw ConfigError("cannot write " + a.output);
  write_ppm(img, h);
  const std::string csv_path = a.csv.empty() ? a.output + ".csv" : a.csv;
  write_output(csv_path, csv.str());
  std::cout << a.table << " heatmap " << h.side << "x" << h.side << ", scale " << h.scale << ", extreme "
            << h.extreme << ", markers " << h.marker_count << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"S-box metrics, random search and SPN avalanche experiments"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Compute the full metric report for an S-box file");
  analyze->add_option("input", an.input, "S-box file")->required();
  analyze->add_option("--base", an.base, "Token base")->check(CLI::IsMember({10, 16}));
  analyze->add_option("--name", an.name, "Name used in the report (default: file stem)");
  analyze->add_flag("--with-degree", an.with_degree, "Include algebraic degree");
  analyze->add_flag("--with-ai", an.with_ai, "Include algebraic immunity");
  analyze->add_option("--ai-scope", an.ai_scope, "Functions AI is minimized over")
      ->check(CLI::IsMember({"coordinates", "components"}));
  analyze->add_option("--format", an.format)->check(CLI::IsMember({"json", "csv"}));
  analyze->add_option("-o,--output", an.output, "Output file (default stdout)");

  GenArgs gn;
  auto* gen = app.add_subcommand("gen", "Generate a power-map S-box x^e over GF(2^n)");
  gen->add_option("family", gn.family, "gold|kasami|welch|niho|dobbertin|inverse|raw")->required();
  gen->add_option("--i", gn.i, "Family parameter i (gold, kasami)");
  gen->add_option("--e", gn.e, "Exponent (raw)");
  gen->add_option("--n", gn.n, "Field width");
  gen->add_option("--irreducible", gn.irreducible, "Modulus bitmask, e.g. 0x11b");
  gen->add_option("-o,--output", gn.output);

  SearchArgs sr;
  auto* search = app.add_subcommand("search", "Random permutation search optimizing one metric");
  search->add_option("--metric", sr.metric, "du|max_bias|dsac|dbic|nl")->required();
  search->add_option("--tries", sr.tries)->required();
  search->add_option("--seed", sr.seed)->required();
  search->add_option("--workers", sr.workers, "Worker threads (default: all cores)");
  search->add_option("--cycles", sr.cycles, "none|64x4|16x16|4x64|256x1|rijndael|comma list");
  search->add_option("--n", sr.n);
  search->add_option("-o,--output", sr.output);
  search->add_option("--log", sr.log, "Write every candidate's score as CSV");

  AvalancheArgs av;
  auto* avalanche = app.add_subcommand("avalanche", "Full-cipher avalanche experiment");
  avalanche->add_option("sbox", av.sbox, "8-bit S-box file")->required();
  avalanche->add_option("--base", av.base)->check(CLI::IsMember({10, 16}));
  avalanche->add_option("--rounds", av.rounds);
  avalanche->add_option("--trials", av.trials);
  avalanche->add_option("--seed", av.seed);
  avalanche->add_option("--pairs", av.pairs, "Read plaintext/key pairs from this file");
  avalanche->add_option("--dump-pairs", av.dump_pairs, "Write the pairs used to this file");
  avalanche->add_option("--workers", av.workers);
  avalanche->add_option("--name", av.name);
  avalanche->add_option("--format", av.format)->check(CLI::IsMember({"json", "csv"}));
  avalanche->add_option("-o,--output", av.output);

  HeatmapArgs hm;
  auto* heatmap = app.add_subcommand("heatmap", "Render a LAT or DDT heatmap as binary PPM plus CSV");
  heatmap->add_option("sbox", hm.sbox)->required();
  heatmap->add_option("--base", hm.base)->check(CLI::IsMember({10, 16}));
  heatmap->add_option("--table", hm.table)->check(CLI::IsMember({"lat", "ddt"}));
  heatmap->add_option("--scale", hm.scale, "Symmetric color bound (LAT in half units)");
  heatmap->add_option("-o,--output", hm.output, "PPM image path")->required();
  heatmap->add_option("--csv", hm.csv, "Raw matrix CSV path (default: <output>.csv)");

  std::string anf_input;
  int anf_base = 10;
  std::string anf_output;
  auto* anf = app.add_subcommand("anf", "Dump the ANF of each coordinate function");
  anf->add_option("sbox", anf_input)->required();
  anf->add_option("--base", anf_base)->check(CLI::IsMember({10, 16}));
  anf->add_option("-o,--output", anf_output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*analyze) return cmd_analyze(an);
    if (*gen) return cmd_gen(gn);
    if (*search) return cmd_search(sr);
    if (*avalanche) return cmd_avalanche(av);
    if (*heatmap) return cmd_heatmap(hm);
    if (*anf) {
      write_output(anf_output, anf_dump(load_sbox(anf_input, anf_base)));
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
