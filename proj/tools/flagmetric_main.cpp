// Command-line surface: distance computation, chain construction, probes,
// experiments and classification-table queries. All arithmetic happens in the
// library; this file only parses, dispatches and formats.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "flagmetric/json_io.hpp"

namespace fm = flagmetric;

namespace {

struct Options {
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string input = "-";
  double rank_rel = 1e-10;
  double geom_abs = 1e-12;
  double metric_abs = 1e-8;
  int max_segments = 4;
  int restarts = 3;
  int dual_samples = 1000;
  std::string scales = "2,4,8,16";
  int quadruples = 200;
  int samples = 200;
  bool no_optimize = false;
  bool real_type_only = false;
  std::string id;
  std::string bind;
};

fm::Tolerance make_tolerance(const Options& opt) {
  fm::Tolerance tol{opt.rank_rel, opt.geom_abs, opt.metric_abs};
  tol.validate();
  return tol;
}

void require_format(const Options& opt, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (opt.format == f) return;
  fm::fail("InvalidFormat", "--format " + opt.format + " is not supported here");
}

fm::Json read_input(const Options& opt) {
  std::string text;
  if (opt.input == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(opt.input);
    if (!in) fm::fail("ParseError", "cannot open input file " + opt.input);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return fm::Json::parse(text);
  } catch (const std::exception& e) {
    fm::fail("ParseError", std::string("input is not valid JSON: ") + e.what());
  }
}

struct PairInput {
  std::unique_ptr<fm::Domain> domain;
  fm::Plane x, y;
};

PairInput read_pair(const Options& opt) {
  fm::Json j = read_input(opt);
  if (!j.contains("domain") || !j.contains("x") || !j.contains("y"))
    fm::fail("ParseError", "expected {domain, x, y}");
  fm::Tolerance tol = make_tolerance(opt);
  PairInput in;
  in.domain = fm::domain_from_json(j.at("domain"), tol);
  in.x = fm::plane_from_json(j.at("x"), tol);
  in.y = fm::plane_from_json(j.at("y"), tol);
  return in;
}

std::vector<double> parse_scales(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      fm::fail("ParseError", "--scales: '" + item + "' is not a number");
    }
  }
  if (out.empty()) fm::fail("ParseError", "--scales: no scales given");
  return out;
}

std::map<std::string, long> parse_bindings(const std::string& text) {
  std::map<std::string, long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      fm::fail("ParseError", "--bind: expected name=value, got '" + item + "'");
    try {
      out[item.substr(0, eq)] = std::stol(item.substr(eq + 1));
    } catch (const std::exception&) {
      fm::fail("ParseError", "--bind: value in '" + item + "' is not an integer");
    }
  }
  return out;
}

fm::SandwichConfig make_sandwich_config(const Options& opt) {
  fm::SandwichConfig cfg;
  cfg.chain.max_segments = opt.max_segments;
  cfg.chain.restarts = opt.restarts;
  cfg.dual_samples = opt.dual_samples;
  cfg.optimize = !opt.no_optimize;
  return cfg;
}

void emit(const fm::Json& j) { std::cout << j.dump(2) << "\n"; }

int run_kob(const Options& opt) {
  require_format(opt, {"json"});
  PairInput in = read_pair(opt);
  fm::MetricReport report = fm::sandwich(*in.domain, in.x, in.y, make_sandwich_config(opt),
                                         fm::SplitMix64(opt.seed), opt.seed);
  fm::Json j;
  j["command"] = "kob";
  j["seed"] = opt.seed;
  j.update(fm::metric_report_to_json(report));
  emit(j);
  return 0;
}

int run_carat(const Options& opt) {
  require_format(opt, {"json"});
  PairInput in = read_pair(opt);
  fm::SplitMix64 rng(opt.seed);
  std::vector<fm::Plane> duals = fm::default_duals(*in.domain, opt.dual_samples, rng);
  fm::CaratheodoryResult res =
      fm::caratheodory_lower(*in.domain, in.x, in.y, duals, !opt.no_optimize, rng.split());
  fm::Json j;
  j["command"] = "carat";
  j["seed"] = opt.seed;
  j["value"] = res.value;
  j["dual_witness"] = {{"xi", fm::plane_to_json(res.witness.xi)},
                       {"eta", fm::plane_to_json(res.witness.eta)}};
  emit(j);
  return 0;
}

int run_chain(const Options& opt) {
  require_format(opt, {"json"});
  PairInput in = read_pair(opt);
  const auto* sym = dynamic_cast<const fm::SymmetricDomain*>(in.domain.get());
  if (!sym) fm::fail("InvalidDomain", "chain: requires a symmetric domain");
  fm::Chain chain = fm::geodesic_r_chain(*sym, in.x, in.y);
  fm::Json j;
  j["command"] = "chain";
  j["seed"] = opt.seed;
  j["closed_form"] = fm::kobayashi_closed_form(*sym, in.x, in.y);
  j["chain"] = fm::chain_to_json(chain);
  emit(j);
  return 0;
}

int run_check_photon(const Options& opt) {
  require_format(opt, {"json"});
  fm::Json input = read_input(opt);
  if (!input.contains("x") || !input.contains("y"))
    fm::fail("ParseError", "expected {x, y}");
  fm::Tolerance tol = make_tolerance(opt);
  fm::Plane x = fm::plane_from_json(input.at("x"), tol);
  fm::Plane y = fm::plane_from_json(input.at("y"), tol);
  if (x.n() != y.n() || x.k() != y.k())
    fm::fail("DimensionMismatch", "check-photon: mismatched planes");
  fm::GrassmannContext ctx{x.k(), x.n() - x.k(), tol};
  ctx.validate();
  const int dist = fm::arithmetic_distance(ctx, x, y);
  fm::Json j;
  j["command"] = "check-photon";
  j["seed"] = opt.seed;
  j["arithmetic_distance"] = dist;
  if (dist == 1) {
    auto ph = fm::photon_through(ctx, x, y);
    j["collinearity_residual"] = fm::photon_collinearity_residual(ctx, *ph);
    j["photon"] = fm::photon_to_json(*ph);
  } else {
    j["collinearity_residual"] = nullptr;
  }
  emit(j);
  return 0;
}

int run_probe(const Options& opt) {
  require_format(opt, {"json"});
  fm::Json input = read_input(opt);
  if (!input.contains("domain")) fm::fail("ParseError", "expected {domain}");
  fm::Tolerance tol = make_tolerance(opt);
  auto dom = fm::domain_from_json(input.at("domain"), tol);
  fm::SplitMix64 rng(opt.seed);
  fm::Json j;
  j["command"] = "probe";
  j["seed"] = opt.seed;
  j["r_proper"] =
      fm::probe_report_to_json(fm::r_proper_probe(*dom, opt.samples, rng.split(), opt.seed));
  j["photon_convexity"] = fm::probe_report_to_json(
      fm::photon_convexity_probe(*dom, opt.samples, rng.split(), opt.seed));
  emit(j);
  return 0;
}

int run_hyperbolicity(const Options& opt) {
  require_format(opt, {"json", "csv"});
  fm::Json input = read_input(opt);
  if (!input.contains("domain")) fm::fail("ParseError", "expected {domain}");
  fm::Tolerance tol = make_tolerance(opt);
  auto dom = fm::domain_from_json(input.at("domain"), tol);
  fm::HyperbolicityConfig cfg;
  cfg.scales = parse_scales(opt.scales);
  cfg.quadruples_per_scale = opt.quadruples;
  cfg.sandwich = make_sandwich_config(opt);
  auto rows = fm::hyperbolicity_probe(*dom, cfg, fm::SplitMix64(opt.seed), opt.seed);
  if (opt.format == "csv") {
    std::cout << fm::hyperbolicity_rows_to_csv(rows);
    return 0;
  }
  fm::Json j;
  j["command"] = "hyperbolicity";
  j["seed"] = opt.seed;
  j["rows"] = fm::hyperbolicity_rows_to_json(rows);
  emit(j);
  return 0;
}

std::string render_text_table(const std::vector<fm::NaganoRow>& rows) {
  std::ostringstream out;
  out << "id       algebra       rank        dim(g_a)  real  space\n";
  for (const auto& row : rows) {
    char line[256];
    std::snprintf(line, sizeof(line), "%-8s %-13s %-11s %-9s %-5s %s\n", row.id.c_str(),
                  row.algebra.c_str(), row.rank.str().c_str(),
                  row.dim_g_alpha.str().c_str(), row.real_type ? "yes" : "no",
                  row.space.c_str());
    out << line;
  }
  return out.str();
}

int run_table(const Options& opt) {
  require_format(opt, {"json", "text"});
  if (!opt.id.empty()) {
    const fm::NaganoRow& row = fm::nagano_lookup(opt.id);
    fm::Json j;
    j["command"] = "table";
    j["seed"] = opt.seed;
    j["row"] = fm::nagano_row_to_json(row);
    if (!opt.bind.empty())
      j["instantiated"] =
          fm::instantiated_row_to_json(fm::instantiate(opt.id, parse_bindings(opt.bind)));
    emit(j);
    return 0;
  }
  std::vector<fm::NaganoRow> rows =
      opt.real_type_only ? fm::real_type_rows() : fm::nagano_table();
  if (opt.format == "text") {
    std::cout << render_text_table(rows);
    return 0;
  }
  fm::Json arr = fm::Json::array();
  for (const auto& row : rows) arr.push_back(fm::nagano_row_to_json(row));
  fm::Json j;
  j["command"] = "table";
  j["seed"] = opt.seed;
  j["rows"] = arr;
  emit(j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Photon-chain metrics on Grassmannian domains"};
  app.require_subcommand(1);

  app.add_option("--seed", opt.seed, "64-bit RNG seed (recorded in every report)");
  app.add_option("--format", opt.format, "json|csv|text (where supported)");
  app.add_option("--input,-i", opt.input, "input file, '-' for stdin");
  app.add_option("--rank-rel", opt.rank_rel, "relative rank tolerance");
  app.add_option("--geom-abs", opt.geom_abs, "absolute geometric tolerance");
  app.add_option("--metric-abs", opt.metric_abs, "absolute metric tolerance");

  auto* kob = app.add_subcommand("kob", "two-sided metric report for a pair of planes");
  kob->add_option("--max-segments", opt.max_segments, "chain search segment cap");
  kob->add_option("--restarts", opt.restarts, "chain search restarts");
  kob->add_option("--dual-samples", opt.dual_samples, "dual sample count");
  kob->add_flag("--no-optimize", opt.no_optimize, "skip local dual optimization");

  auto* carat = app.add_subcommand("carat", "Caratheodory lower bound only");
  carat->add_option("--dual-samples", opt.dual_samples, "dual sample count");
  carat->add_flag("--no-optimize", opt.no_optimize, "skip local dual optimization");

  app.add_subcommand("chain", "explicit geodesic chain on a symmetric domain");
  app.add_subcommand("check-photon", "collinearity residual and arithmetic distance");

  auto* probe = app.add_subcommand("probe", "properness and convexity probes");
  probe->add_option("--samples", opt.samples, "photons sampled per probe");

  auto* hyp = app.add_subcommand("hyperbolicity", "four-point delta per scale");
  hyp->add_option("--scales", opt.scales, "comma-separated scales");
  hyp->add_option("--quadruples", opt.quadruples, "quadruples per scale");
  hyp->add_option("--max-segments", opt.max_segments, "chain search segment cap");
  hyp->add_option("--restarts", opt.restarts, "chain search restarts");
  hyp->add_option("--dual-samples", opt.dual_samples, "dual sample count");

  auto* table = app.add_subcommand("table", "classification table queries");
  table->add_flag("--real-type", opt.real_type_only, "only real-type rows");
  table->add_option("--id", opt.id, "row id (i..xix) or name");
  table->add_option("--bind", opt.bind, "parameter bindings, e.g. p=2,q=2");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "kob") return run_kob(opt);
    if (command == "carat") return run_carat(opt);
    if (command == "chain") return run_chain(opt);
    if (command == "check-photon") return run_check_photon(opt);
    if (command == "probe") return run_probe(opt);
    if (command == "hyperbolicity") return run_hyperbolicity(opt);
    if (command == "table") return run_table(opt);
    fm::fail("ParseError", "unknown command " + command);
  } catch (const fm::Error& e) {
    std::cerr << fm::error_to_json(e.code(), e.what(), fm::Json{{"command", command}}).dump()
              << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << fm::error_to_json("ParseError", e.what(), fm::Json{{"command", command}}).dump()
              << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << fm::error_to_json("Internal", e.what(), fm::Json{{"command", command}}).dump()
              << "\n";
    return 1;
  }
}
