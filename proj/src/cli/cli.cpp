#include "gpoly/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "gpoly/error.hpp"
#include "gpoly/experiments.hpp"
#include "gpoly/geometry.hpp"
#include "gpoly/records.hpp"
#include "gpoly/sampling.hpp"
#include "gpoly/special.hpp"
#include "gpoly/theory.hpp"
#include "gpoly/verify.hpp"

namespace gpoly {

namespace {

using nlohmann::json;

struct Options {
  std::string command;
  std::string mode;
  int d = 0;
  int n = 0;
  int k = -1;
  bool all_k = false;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t trials = 100000;
  unsigned workers = 0;
  double alpha = 2.0;
  double r = 0.0;
  bool statement_exponents = false;
  bool facets = false;
  std::string suite = "all";
  std::string points;
  std::string out_path;
  std::string report_path;
  std::string out_dir;
  std::string format = "json";
  std::vector<int> d_values = {2, 3, 4, 5, 6, 7};
};

const std::set<std::string> kFlagKeys = {"all-k", "statement-exponents", "facets"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool has_flag(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

/// Pulls `--params FILE` out of args and appends every key=value in FILE that
/// the command line does not already set.
std::vector<std::string> merge_params_file(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--params") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--params needs a file name");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--params=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--params", "cannot open parameter file " + path);
  std::string line;
  int lineno = 0;
  std::vector<std::string> extra;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--params", path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    std::replace(key.begin(), key.end(), '_', '-');
    if (has_flag(args, key)) continue;
    if (kFlagKeys.contains(key)) {
      if (value == "true" || value == "1" || value == "yes") extra.push_back("--" + key);
    } else {
      extra.push_back("--" + key);
      extra.push_back(value);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double binomial_as_double(int n, int d) {
  try {
    return static_cast<double>(binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(d)));
  } catch (const Error&) {
    return std::exp(log_binomial(n, d));
  }
}

void emit(std::ostream& out, const json& record) { out << record.dump() << '\n'; }

// ---- sample / enumerate ------------------------------------------------------

int cmd_sample(const Options& o, std::ostream& primary, std::ostream& out, std::ostream& err) {
  RngStream rng(o.seed, o.stream_id);
  const PointSet ps = gaussian_point_set(rng, o.n, o.d);
  std::ostringstream csv;
  write_point_set_csv(csv, ps);
  primary << csv.str();
  json record = {{"name", "sample"},
                 {"params", {{"d", o.d}, {"n", o.n}, {"seed", o.seed}, {"stream", o.stream_id}}},
                 {"provenance", {{"master_seed", o.seed}, {"stream_id", o.stream_id}}},
                 {"digest", fnv1a64_hex(csv.str())},
                 {"status", "ok"}};
  if (o.out_path.empty()) {
    out << csv.str();
    emit(err, record);
  } else {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw Error("cannot write " + o.out_path);
    f << csv.str();
    record["path"] = o.out_path;
    emit(out, record);
  }
  return kExitOk;
}

int cmd_enumerate(const Options& o, std::ostream& primary, std::ostream& out, std::ostream& err) {
  std::ifstream in(o.points);
  if (!in) throw Error("cannot read " + o.points);
  const PointSet ps = read_point_set_csv(in);
  const GeneralPositionReport gp = general_position_check(ps);
  if (!gp.passed) {
    err << "warning: " << gp.violation_count << " affinely dependent subsets found\n";
  }
  std::ostringstream csv;
  if (o.facets) {
    write_facets_csv(csv, facet_set(ps));
  } else {
    write_profile_csv(csv, kfacet_profile(ps));
  }
  primary << csv.str();
  if (o.out_path.empty()) {
    out << csv.str();
  } else {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw Error("cannot write " + o.out_path);
    f << csv.str();
  }
  return kExitOk;
}

// ---- kfacets -------------------------------------------------------------------

int cmd_kfacets(const Options& o, std::ostream& primary, std::ostream& err) {
  if (o.all_k == (o.k >= 0)) throw DomainError("kfacets: give exactly one of --k and --all-k");
  if (o.d < 1 || o.n < o.d + 1) throw DomainError("kfacets: need d >= 1 and n >= d + 1");
  std::vector<int> ks;
  if (o.all_k) {
    for (int k = 0; k <= o.n - o.d; ++k) ks.push_back(k);
  } else {
    ks.push_back(o.k);
  }
  const double subsets = binomial_as_double(o.n, o.d);

  std::vector<json> records;
  if (o.mode == "exact") {
    for (int k : ks) {
      const KFacetFormulaInputs in(o.n, o.d, k);
      const double log_value = log_kfacet_expectation_exact(in);
      records.push_back({{"name", "kfacets/exact"},
                         {"params", {{"d", o.d}, {"n", o.n}, {"k", k}}},
                         {"value", std::exp(log_value)},
                         {"log_value", log_value},
                         {"probability", kfacet_probability_exact(in)},
                         {"status", "ok"}});
    }
  } else {
    std::vector<MCEstimate> expectation;
    if (o.mode == "mc") {
      if (o.all_k) {
        expectation = kfacet_profile_mc(o.n, o.d, o.trials, o.seed, o.workers);
      } else {
        expectation.push_back(kfacet_expectation_mc(o.n, o.d, o.k, o.trials, o.seed, o.workers));
      }
    } else {
      std::vector<MCEstimate> prob;
      if (o.mode == "reduced") {
        if (o.all_k) {
          prob = reduced_kfacet_profile_mc(o.n, o.d, o.trials, o.seed, o.workers);
        } else {
          prob.push_back(reduced_kfacet_probability_mc(o.n, o.d, o.k, o.trials, o.seed, o.workers));
        }
      } else {
        for (int k : ks) prob.push_back(fixed_subset_kfacet_probability_mc(o.n, o.d, k, o.trials, o.seed, o.workers));
      }
      for (const MCEstimate& p : prob) expectation.push_back(p.scaled(subsets));
    }
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const double exact = kfacet_expectation_exact(KFacetFormulaInputs(o.n, o.d, ks[i]));
      records.push_back({{"name", "kfacets/" + o.mode},
                         {"params", {{"d", o.d}, {"n", o.n}, {"k", ks[i]}, {"trials", o.trials}, {"seed", o.seed}}},
                         {"estimate", to_json(expectation[i])},
                         {"probability", to_json(expectation[i].scaled(1.0 / subsets))},
                         {"exact", exact},
                         {"z_vs_exact", z_score(expectation[i], exact)},
                         {"status", "ok"}});
    }
  }

  if (o.format == "table") {
    primary << "k\tvalue\tse\texact\n";
    for (const json& r : records) {
      primary << r["params"]["k"].get<int>() << '\t';
      if (r.contains("estimate")) {
        primary << fmt6(r["estimate"]["mean"].get<double>()) << '\t' << fmt6(r["estimate"]["se"].get<double>()) << '\t'
                << fmt6(r["exact"].get<double>()) << '\n';
      } else {
        primary << fmt6(r["value"].get<double>()) << "\t0\t" << fmt6(r["value"].get<double>()) << '\n';
      }
    }
  } else {
    for (const json& r : records) emit(primary, r);
  }
  (void)err;
  return kExitOk;
}

// ---- constants -----------------------------------------------------------------

int cmd_constants(const Options& o, std::ostream& primary) {
  std::vector<json> records;
  if (o.mode == "kfacet") {
    const ExponentConvention conv = o.statement_exponents ? ExponentConvention::Statement : ExponentConvention::Proof;
    const ConstantResult c = c_alpha_r(o.alpha, o.r, conv);
    json j = to_json(c);
    j["growth_base"] = growth_base_kfacet(o.alpha, o.r, conv);
    records.push_back(j);
  } else {
    const ConstantResult mm = estranged_constant(Sign::Minus, Sign::Minus);
    records.push_back(to_json(mm));
    records.push_back(to_json(estranged_constant(Sign::Minus, Sign::Plus)));
    records.push_back(to_json(estranged_constant(Sign::Plus, Sign::Minus)));
    records.push_back(to_json(estranged_constant(Sign::Plus, Sign::Plus)));
    const ConstantResult pair = estranged_constant_reduced();
    records.push_back(to_json(pair));
    records.push_back({{"name", "4*C_pair"},
                       {"params", json::object()},
                       {"value", 4.0 * pair.value},
                       {"reduced_minus_full", pair.value - mm.value},
                       {"status", "ok"}});
  }

  if (o.format == "table") {
    for (const json& r : records) {
      primary << r["name"].get<std::string>() << '\t' << fmt6(r["value"].get<double>());
      if (r.contains("growth_base")) primary << "\tbase " << fmt6(r["growth_base"].get<double>());
      if (r.contains("argmax")) {
        primary << "\targmax";
        for (double x : r["argmax"]) primary << ' ' << fmt6(x);
      }
      primary << '\n';
    }
  } else {
    for (const json& r : records) emit(primary, r);
  }
  return kExitOk;
}

// ---- estranged -----------------------------------------------------------------

int cmd_estranged(const Options& o, std::ostream& primary) {
  const double pair_constant = estranged_constant_reduced().value;
  json j;
  if (o.mode == "mc") {
    const MCEstimate e = estranged_expectation_mc(o.d, o.trials, o.seed, o.workers);
    j = {{"name", "estranged/mc"},
         {"params", {{"d", o.d}, {"trials", o.trials}, {"seed", o.seed}}},
         {"estimate", to_json(e)},
         {"root", std::pow(e.mean, 1.0 / o.d)},
         {"reference_base", 4.0 * pair_constant},
         {"status", "ok"}};
  } else {
    const MCEstimate e = pair_facet_probability_mc(o.d, o.trials, o.seed, o.workers);
    j = {{"name", "estranged/pairprob"},
         {"params", {{"d", o.d}, {"trials", o.trials}, {"seed", o.seed}}},
         {"estimate", to_json(e)},
         {"root", std::pow(e.mean, 1.0 / o.d)},
         {"reference_base", pair_constant},
         {"predicted_pairs", to_json(e.scaled(0.5 * binomial_as_double(2 * o.d, o.d)))},
         {"status", "ok"}};
  }
  if (o.format == "table") {
    primary << j["name"].get<std::string>() << "\tmean " << fmt6(j["estimate"]["mean"].get<double>()) << "\tse "
            << fmt6(j["estimate"]["se"].get<double>()) << "\troot " << fmt6(j["root"].get<double>()) << "\treference "
            << fmt6(j["reference_base"].get<double>()) << '\n';
  } else {
    emit(primary, j);
  }
  return kExitOk;
}

// ---- verify / growth -------------------------------------------------------------

int cmd_verify(const Options& o, std::ostream& primary, std::ostream& err) {
  const std::vector<VerificationReport> reports = run_suite(o.suite, o.seed, o.workers);
  json all = json::array();
  for (const VerificationReport& r : reports) all.push_back(to_json(r));

  if (o.format == "table") {
    for (const VerificationReport& r : reports) {
      primary << (r.passed ? "PASS " : "FAIL ") << r.name << "\ttheory " << fmt6(r.theory);
      if (r.estimate) primary << "\tmean " << fmt6(r.estimate->mean) << "\tse " << fmt6(r.estimate->std_error);
      if (r.z) primary << "\tz " << fmt6(*r.z);
      for (const auto& [key, value] : r.details) primary << '\t' << key << ' ' << fmt6(value);
      primary << '\n';
    }
  } else {
    for (const json& j : all) emit(primary, j);
  }
  if (!o.report_path.empty()) {
    std::ofstream f(o.report_path, std::ios::binary);
    if (!f) throw Error("cannot write " + o.report_path);
    f << all.dump(2) << '\n';
  }

  int failures = 0;
  for (const VerificationReport& r : reports) {
    if (!r.passed) {
      err << "FAILED: " << r.name << '\n';
      ++failures;
    }
  }
  err << reports.size() - static_cast<std::size_t>(failures) << '/' << reports.size() << " checks passed\n";
  return failures == 0 ? kExitOk : kExitVerificationFailed;
}

int cmd_growth(const Options& o, std::ostream& primary) {
  const std::vector<GrowthRow> rows = facet_growth_table(o.alpha, o.r, o.d_values, o.trials, o.seed, o.workers);
  primary << "d,n,mean,se,root,base\n";
  for (const GrowthRow& row : rows) {
    primary << row.d << ',' << row.n << ',' << fmt17(row.estimate.mean) << ',' << fmt17(row.estimate.std_error) << ','
            << fmt17(row.root) << ',' << fmt17(row.base) << '\n';
  }
  return kExitOk;
}

json params_of(const Options& o) {
  return {{"command", o.command}, {"mode", o.mode},     {"d", o.d},         {"n", o.n},
          {"k", o.k},             {"all_k", o.all_k},   {"seed", o.seed},   {"stream", o.stream_id},
          {"trials", o.trials},   {"workers", o.workers}, {"alpha", o.alpha}, {"r", o.r},
          {"statement_exponents", o.statement_exponents}, {"suite", o.suite}, {"points", o.points},
          {"out", o.out_path},    {"report", o.report_path}, {"format", o.format}, {"d_values", o.d_values}};
}

void add_run_options(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "Master seed");
  sub->add_option("--workers", o.workers, "Worker threads (0 = all cores)")->envname("GPOLY_WORKERS");
  sub->add_option("--out-dir", o.out_dir, "Append a run record to DIR/runs.jsonl");
}

void add_format_option(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "table"}));
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Gaussian random polytope experiments", "gpoly"};
  app.require_subcommand(1);
  app.footer("Any option may also be given as key=value in a file passed with --params FILE; flags win.");

  auto* sample = app.add_subcommand("sample", "Draw a Gaussian point set as CSV");
  sample->add_option("--d", o.d, "Dimension")->required()->check(CLI::PositiveNumber);
  sample->add_option("--n", o.n, "Number of points")->required()->check(CLI::PositiveNumber);
  sample->add_option("--stream", o.stream_id, "Stream id");
  sample->add_option("--out", o.out_path, "Output CSV path (stdout if omitted)");
  add_run_options(sample, o);

  auto* enumerate = app.add_subcommand("enumerate", "k-facet profile or facet list of a CSV point set");
  enumerate->add_option("--points", o.points, "Point set CSV")->required()->check(CLI::ExistingFile);
  enumerate->add_flag("--facets", o.facets, "List facets instead of the k-facet profile");
  enumerate->add_option("--out", o.out_path, "Output CSV path (stdout if omitted)");
  enumerate->add_option("--out-dir", o.out_dir, "Append a run record to DIR/runs.jsonl");

  auto* kfacets = app.add_subcommand("kfacets", "Expected number of k-facets");
  kfacets->add_option("mode", o.mode, "exact | mc | reduced | fixed")
      ->required()
      ->check(CLI::IsMember({"exact", "mc", "reduced", "fixed"}));
  kfacets->add_option("--d", o.d, "Dimension")->required()->check(CLI::PositiveNumber);
  kfacets->add_option("--n", o.n, "Number of points")->required()->check(CLI::PositiveNumber);
  auto* k_opt = kfacets->add_option("--k", o.k, "k")->check(CLI::NonNegativeNumber);
  kfacets->add_flag("--all-k", o.all_k, "Every k from 0 to n-d")->excludes(k_opt);
  kfacets->add_option("--trials", o.trials, "Monte Carlo trials")->check(CLI::Range(2ULL, ~0ULL));
  add_run_options(kfacets, o);
  add_format_option(kfacets, o);

  auto* constants = app.add_subcommand("constants", "Asymptotic constants");
  constants->add_option("target", o.mode, "kfacet | estranged")
      ->required()
      ->check(CLI::IsMember({"kfacet", "estranged"}));
  constants->add_option("--alpha", o.alpha, "n/d ratio (> 1)");
  constants->add_option("--r", o.r, "k/(n-d) ratio in [0, 1]");
  constants->add_flag("--statement-exponents", o.statement_exponents, "Use the exponents r*alpha, alpha-1-r*alpha");
  constants->add_option("--out-dir", o.out_dir, "Append a run record to DIR/runs.jsonl");
  add_format_option(constants, o);

  auto* estranged = app.add_subcommand("estranged", "Estranged facet pairs of 2d Gaussian points");
  estranged->add_option("mode", o.mode, "mc | pairprob")->required()->check(CLI::IsMember({"mc", "pairprob"}));
  estranged->add_option("--d", o.d, "Dimension")->required()->check(CLI::PositiveNumber);
  estranged->add_option("--trials", o.trials, "Monte Carlo trials")->check(CLI::Range(2ULL, ~0ULL));
  add_run_options(estranged, o);
  add_format_option(estranged, o);

  auto* verify = app.add_subcommand("verify", "Simulation-versus-theory checks");
  std::vector<std::string> suites = {"all"};
  suites.insert(suites.end(), suite_names().begin(), suite_names().end());
  verify->add_option("--suite", o.suite, "Suite name")->check(CLI::IsMember(suites));
  verify->add_option("--report", o.report_path, "Also write the JSON report to this path");
  add_run_options(verify, o);
  add_format_option(verify, o);

  auto* growth = app.add_subcommand("growth", "Trend table of (E e_k)^(1/d) against the growth base");
  growth->add_option("--alpha", o.alpha, "n/d ratio (> 1)");
  growth->add_option("--r", o.r, "k/(n-d) ratio in [0, 1]");
  growth->add_option("--d-values", o.d_values, "Dimensions")->delimiter(',');
  growth->add_option("--trials", o.trials, "Monte Carlo trials per row")->check(CLI::Range(2ULL, ~0ULL));
  add_run_options(growth, o);

  const std::string command_line = [&] {
    std::string s = "gpoly";
    for (const std::string& a : args) s += " " + a;
    return s;
  }();
  const std::string started = utc_timestamp();

  try {
    args = merge_params_file(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::ostringstream primary;
  int status = kExitOk;
  try {
    if (sample->parsed()) {
      o.command = "sample";
      status = cmd_sample(o, primary, out, err);
    } else if (enumerate->parsed()) {
      o.command = "enumerate";
      status = cmd_enumerate(o, primary, out, err);
    } else {
      if (kfacets->parsed()) {
        o.command = "kfacets";
        status = cmd_kfacets(o, primary, err);
      } else if (constants->parsed()) {
        o.command = "constants";
        status = cmd_constants(o, primary);
      } else if (estranged->parsed()) {
        o.command = "estranged";
        status = cmd_estranged(o, primary);
      } else if (verify->parsed()) {
        o.command = "verify";
        status = cmd_verify(o, primary, err);
      } else if (growth->parsed()) {
        o.command = "growth";
        status = cmd_growth(o, primary);
      }
      out << primary.str();
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    status = kExitUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    status = kExitUsage;
  } catch (const ResourceBoundError& e) {
    err << "error: " << e.what() << '\n';
    status = kExitUsage;
  } catch (const DegeneracyError& e) {
    err << "error: " << e.what() << '\n';
    status = kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    status = kExitRuntime;
  }
  out.flush();

  if (!o.out_dir.empty()) {
    RunRecord rec;
    rec.command_line = command_line;
    rec.params = params_of(o);
    rec.master_seed = o.seed;
    rec.started_at = started;
    rec.finished_at = utc_timestamp();
    rec.output_digest = fnv1a64_hex(primary.str());
    rec.exit_code = status;
    try {
      append_run_record(o.out_dir, rec);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      if (status == kExitOk) status = kExitRuntime;
    }
  }
  return status;
}

}  // namespace gpoly
