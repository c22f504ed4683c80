// tune: command-line front end for configurator experiments, summaries,
// landscape analysis and SAPS landscape evaluation.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ptune/csv.hpp"
#include "ptune/errors.hpp"
#include "ptune/experiments.hpp"
#include "ptune/landscape.hpp"
#include "ptune/sat.hpp"

namespace {

struct RunArgs {
  std::string family = "synthetic";
  std::string configurator = "paramrls";
  std::string op = "harmonic";
  std::string direction = "random-direction";
  std::optional<int> ell;
  std::vector<int> sizes;
  int reps = 50;
  int runs = 50;
  std::optional<int> kappa;
  int n = 50;
  std::uint64_t seed = 1;
  std::string out;
  std::string landscape;
  std::size_t targets = 5;
  std::string synthetic = "unimodal";
  double sawtooth_alpha = 2.0;
  int ils_r = 0;
  std::optional<int> ils_s;
  std::optional<double> ils_restart;
  bool reject_ties = false;
  std::uint64_t max_calls = 1'000'000;
  unsigned threads = 0;
  bool full_scale = false;
  bool no_meta = false;
};

int cmd_run(const RunArgs& a) {
  using namespace ptune;
  ScenarioSpec spec = default_scenario(parse_family(a.family));
  spec.configurator = parse_configurator(a.configurator);
  spec.op.kind = parse_operator_kind(a.op);
  spec.op.direction = parse_direction_mode(a.direction);
  spec.max_step = a.ell;
  if (!a.sizes.empty()) spec.sizes = a.sizes;
  if (a.full_scale) apply_full_scale(spec);
  spec.repetitions = a.full_scale ? spec.repetitions : a.reps;
  spec.runs = a.full_scale ? spec.runs : a.runs;
  spec.cutoff = a.kappa;
  spec.n = a.n;
  spec.seed = a.seed;
  spec.landscape_path = a.landscape;
  spec.target_count = a.targets;
  spec.synthetic_kind = parse_synthetic_kind(a.synthetic);
  spec.sawtooth_alpha = a.sawtooth_alpha;
  spec.ils.initial_samples = a.ils_r;
  if (a.ils_s) {
    spec.ils.perturbation_strength = *a.ils_s;
    spec.ils_s_defaulted = false;
  }
  if (a.ils_restart) {
    spec.ils.restart_probability = *a.ils_restart;
    spec.ils_restart_defaulted = false;
  }
  spec.accept_ties = !a.reject_ties;
  spec.max_calls = a.max_calls;
  spec.threads = a.threads;

  const auto records = run_scenario(spec);
  if (a.out.empty() || a.out == "-") {
    emit_raw_csv(records, std::cout);
  } else {
    emit_raw_csv(records, a.out);
    if (!a.no_meta) {
      std::ofstream meta(a.out + ".meta", std::ios::binary);
      for (const auto& line : scenario_metadata(spec)) meta << line << '\n';
      if (!meta) throw ConfigError("cannot write '" + a.out + ".meta'");
    }
  }
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.better_calls ? 0 : 1;
  if (failed > 0) std::cerr << "warning: " << failed << " repetition(s) failed\n";
  return 0;
}

int cmd_summarize(const std::string& raw, const std::string& baseline, const std::string& candidate,
                  const std::string& out) {
  const auto rows = ptune::summarize(ptune::load_raw_csv(raw), baseline, candidate);
  if (out.empty() || out == "-") {
    ptune::emit_summary_csv(rows, std::cout);
  } else {
    ptune::emit_summary_csv(rows, out);
  }
  return 0;
}

std::string witness_text(const ptune::UnimodalityWitness& w) {
  return "(" + std::to_string(w.x) + ", " + std::to_string(w.y) + ")";
}

int cmd_landscape_check(const std::string& file, std::optional<double> alpha, std::optional<int> beta) {
  using namespace ptune;
  const Landscape land = load_cached_landscape(file, 1);
  if (land.space().dimension_count() == 1) {
    if (!alpha && !beta) {
      const auto cert = minimal_certificate(land.values());
      std::cout << "alpha,beta\n";
      for (const auto& p : cert.pareto) std::cout << csv::format_double(p.alpha) << ',' << p.beta << '\n';
      return 0;
    }
    const auto w = check_approx_unimodal(land, alpha.value_or(1.0), beta.value_or(1));
    if (w) {
      std::cout << "fail: witness " << witness_text(*w) << '\n';
      return 1;
    }
    std::cout << "pass\n";
    return 0;
  }
  const auto reports = check_slices(land, alpha.value_or(1.0), beta.value_or(1));
  bool all_pass = true;
  std::cout << "dimension,anchor,result\n";
  for (const auto& r : reports) {
    std::string anchor = r.anchor.to_string();
    for (char& c : anchor) {
      if (c == ',') c = ' ';
    }
    std::cout << land.space().dim(r.dimension).name << ',' << anchor << ',';
    if (!r.unique_optimum) {
      std::cout << "no unique optimum\n";
      all_pass = false;
    } else if (r.witness) {
      std::cout << "fail " << witness_text(*r.witness) << '\n';
      all_pass = false;
    } else {
      std::cout << "pass\n";
    }
  }
  return all_pass ? 0 : 1;
}

struct EvalArgs {
  std::vector<std::string> cnf;
  int planted = 0;
  int vars = 100;
  int clauses = 420;
  int alpha_count = 30;
  int rho_count = 16;
  int reps = 10;
  int kappa = 10000;
  std::uint64_t seed = 1;
  double ps = 0.05;
  double wp = 0.01;
  std::size_t targets = 5;
  std::string out;
  std::string save_instances;
};

int cmd_evaluate_landscape(const EvalArgs& a) {
  using namespace ptune;
  std::vector<CnfFormula> instances;
  for (const auto& path : a.cnf) instances.push_back(load_dimacs(path));
  Engine rng = make_engine(derive_seed(a.seed, hash_tag("planted")));
  for (int i = 0; i < a.planted; ++i) {
    instances.push_back(generate_planted_3sat(a.vars, a.clauses, rng).formula);
    if (!a.save_instances.empty()) {
      const std::string path = a.save_instances + std::to_string(i) + ".cnf";
      std::ofstream f(path, std::ios::binary);
      f << to_dimacs(instances.back());
      if (!f) throw ConfigError("cannot write '" + path + "'");
    }
  }
  if (instances.empty()) throw ConfigError("give --cnf files or --planted N");
  SapsParams base;
  base.ps = a.ps;
  base.wp = a.wp;
  const Landscape land =
      evaluate_saps_landscape(instances, saps_grid(a.alpha_count, a.rho_count), a.reps, a.kappa, a.seed, base, a.targets);
  if (a.out.empty() || a.out == "-") {
    write_cached_landscape(land, std::cout);
  } else {
    write_cached_landscape(land, a.out);
  }
  return 0;
}

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

// Expands `--config <file>` of the chosen subcommand: each `key=value` line
// becomes `--key value` unless --key already appears on the command line.
// Blank lines and lines starting with '#' are skipped.
std::vector<std::string> with_config(CLI::App& app, int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) return args;
  CLI::App* sub = app.get_subcommand_no_throw(args[0]);
  if (sub == nullptr) return args;

  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");

  std::vector<std::string> extra;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr || key == "config") {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (given_on_command_line(args, flag)) continue;
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1" || value == "yes") extra.push_back(flag);
      continue;
    }
    extra.push_back(flag);
    extra.push_back(value);
  }
  args.insert(args.begin() + 1, extra.begin(), extra.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perturbative algorithm configuration experiments", "tune"};
  app.require_subcommand(1);
  std::string config_path;

  RunArgs run;
  auto* sub_run = app.add_subcommand("run", "Run repeated configurator trials and write raw CSV");
  sub_run->add_option("--config", config_path, "Read options from a key=value file");
  sub_run->add_option("--family", run.family, "ridge-ea|leadingones-ea|onemax-rls|saps-cached|synthetic")
      ->capture_default_str();
  sub_run->add_option("--configurator", run.configurator, "paramrls|paramils")->capture_default_str();
  sub_run->add_option("--operator", run.op, "lstep|random|random-wr|harmonic")->capture_default_str();
  sub_run->add_option("--direction", run.direction, "random-direction|best-of-both (harmonic)")
      ->capture_default_str();
  sub_run->add_option("--ell", run.ell, "Maximum step of the l-step operator (family default)");
  sub_run->add_option("--sizes", run.sizes, "Space sizes, e.g. 10,20,50")->delimiter(',');
  sub_run->add_option("--reps", run.reps, "Repetitions per size")->capture_default_str();
  sub_run->add_option("--r", run.runs, "Runs per configuration in each comparison")->capture_default_str();
  sub_run->add_option("--kappa", run.kappa, "Cutoff in target iterations (family default)");
  sub_run->add_option("--n", run.n, "Bit-string length of benchmark targets")->capture_default_str();
  sub_run->add_option("--seed", run.seed, "Master seed")->capture_default_str();
  sub_run->add_option("--out", run.out, "Raw CSV path; '-' or empty for stdout");
  sub_run->add_option("--landscape", run.landscape, "Cached landscape CSV (saps-cached)");
  sub_run->add_option("--targets", run.targets, "Target set size for cached landscapes")->capture_default_str();
  sub_run->add_option("--synthetic", run.synthetic, "unimodal|plateau|sawtooth|deceptive")->capture_default_str();
  sub_run->add_option("--sawtooth-alpha", run.sawtooth_alpha, "Alpha of sawtooth landscapes")->capture_default_str();
  sub_run->add_option("--ils-R", run.ils_r, "ParamILS initial random samples")->capture_default_str();
  sub_run->add_option("--ils-s", run.ils_s, "ParamILS perturbation strength (default 3)");
  sub_run->add_option("--ils-restart", run.ils_restart, "ParamILS restart probability (default 0.01)");
  sub_run->add_flag("--reject-ties", run.reject_ties, "ParamRLS keeps the incumbent on equal performance");
  sub_run->add_option("--max-calls", run.max_calls, "Safety budget of better() calls per trial (0: none)")
      ->capture_default_str();
  sub_run->add_option("--threads", run.threads, "Worker threads (0: TUNE_THREADS or all cores)");
  sub_run->add_flag("--full-scale", run.full_scale, "r=1500 and 200 repetitions (500 for saps-cached)");
  sub_run->add_flag("--no-meta", run.no_meta, "Do not write the <out>.meta sidecar");

  std::string raw, baseline = "lstep", candidate = "harmonic", summary_out;
  auto* sub_sum = app.add_subcommand("summarize", "Per-size means, Mann-Whitney p and Cliff's delta");
  sub_sum->add_option("--config", config_path, "Read options from a key=value file");
  sub_sum->add_option("--raw", raw, "Raw CSV from 'tune run'")->required();
  sub_sum->add_option("--baseline", baseline, "Baseline operator")->capture_default_str();
  sub_sum->add_option("--candidate", candidate, "Candidate operator")->capture_default_str();
  sub_sum->add_option("--out", summary_out, "Summary CSV path; '-' or empty for stdout");

  std::string check_file;
  std::optional<double> check_alpha;
  std::optional<int> check_beta;
  auto* sub_check = app.add_subcommand("landscape-check", "Approximate-unimodality check of a landscape CSV");
  sub_check->add_option("--file", check_file, "Landscape CSV")->required();
  sub_check->add_option("--alpha", check_alpha, "Alpha >= 1");
  sub_check->add_option("--beta", check_beta, "Beta >= 1");

  EvalArgs ev;
  auto* sub_eval = app.add_subcommand("evaluate-landscape", "Exhaustive SAPS (alpha, rho) grid evaluation");
  sub_eval->add_option("--config", config_path, "Read options from a key=value file");
  sub_eval->add_option("--cnf", ev.cnf, "DIMACS instance files");
  sub_eval->add_option("--planted", ev.planted, "Number of generated planted 3-SAT instances")->capture_default_str();
  sub_eval->add_option("--vars", ev.vars, "Variables per planted instance")->capture_default_str();
  sub_eval->add_option("--clauses", ev.clauses, "Clauses per planted instance")->capture_default_str();
  sub_eval->add_option("--alpha-count", ev.alpha_count, "Number of alpha values (16/15 upward)")->capture_default_str();
  sub_eval->add_option("--rho-count", ev.rho_count, "Number of rho values (0 upward, at most 16)")
      ->capture_default_str();
  sub_eval->add_option("--reps", ev.reps, "Runs per cell and instance")->capture_default_str();
  sub_eval->add_option("--kappa", ev.kappa, "SAPS step cutoff")->capture_default_str();
  sub_eval->add_option("--seed", ev.seed, "Master seed")->capture_default_str();
  sub_eval->add_option("--ps", ev.ps, "SAPS smoothing probability")->capture_default_str();
  sub_eval->add_option("--wp", ev.wp, "SAPS random-walk probability")->capture_default_str();
  sub_eval->add_option("--targets", ev.targets, "Target set size recorded for the landscape")->capture_default_str();
  sub_eval->add_option("--out", ev.out, "Landscape CSV path; '-' or empty for stdout");
  sub_eval->add_option("--save-instances", ev.save_instances, "Write planted instances as <prefix><i>.cnf");

  std::vector<std::string> args;
  try {
    args = with_config(app, argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "tune: " << e.what() << '\n';
    return 2;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*sub_run) return cmd_run(run);
    if (*sub_sum) return cmd_summarize(raw, baseline, candidate, summary_out);
    if (*sub_check) return cmd_landscape_check(check_file, check_alpha, check_beta);
    if (*sub_eval) return cmd_evaluate_landscape(ev);
  } catch (const std::exception& e) {
    std::cerr << "tune: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
