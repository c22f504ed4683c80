#include "ptune/experiments.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "parallel.hpp"
#include "ptune/csv.hpp"
#include "ptune/errors.hpp"
#include "ptune/stats.hpp"
#include "ptune/targets.hpp"

namespace ptune {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::ridge_ea: return "ridge-ea";
    case Family::leadingones_ea: return "leadingones-ea";
    case Family::onemax_rls: return "onemax-rls";
    case Family::saps_cached: return "saps-cached";
    case Family::synthetic: return "synthetic";
  }
  return "?";
}

Family parse_family(std::string_view text) {
  for (Family f : {Family::ridge_ea, Family::leadingones_ea, Family::onemax_rls, Family::saps_cached,
                   Family::synthetic}) {
    if (text == to_string(f)) return f;
  }
  throw ConfigError("unknown scenario family '" + std::string(text) + "'");
}

std::string_view to_string(ConfiguratorKind k) {
  return k == ConfiguratorKind::param_rls ? "paramrls" : "paramils";
}

ConfiguratorKind parse_configurator(std::string_view text) {
  if (text == "paramrls" || text == "paramhs") return ConfiguratorKind::param_rls;
  if (text == "paramils") return ConfiguratorKind::param_ils;
  throw ConfigError("unknown configurator '" + std::string(text) + "'");
}

namespace {

bool is_benchmark(Family f) {
  return f == Family::ridge_ea || f == Family::leadingones_ea || f == Family::onemax_rls;
}

int family_ell(Family f) { return f == Family::onemax_rls ? 2 : 1; }

int family_cutoff(Family f) {
  switch (f) {
    case Family::ridge_ea:
    case Family::leadingones_ea: return 2500;
    case Family::onemax_rls: return 200;
    default: return 1;
  }
}

std::vector<int> range_sizes(int from, int to, int step) {
  std::vector<int> out;
  for (int s = from; s <= to; s += step) out.push_back(s);
  return out;
}

// The label under which records of an operator are stored and summarized.
std::string operator_label(const OperatorSpec& op) {
  std::string label(to_string(op.kind));
  if (op.kind == OperatorKind::harmonic && op.direction == DirectionMode::best_of_both) label += "-both";
  return label;
}

std::string accounting_mode(const OperatorSpec& op) {
  std::string mode = "all-calls";
  if (op.kind == OperatorKind::harmonic && op.direction == DirectionMode::best_of_both) mode += "+intra-mutation";
  return mode;
}

std::shared_ptr<const Landscape> saps_landscape(const ScenarioSpec& spec) {
  if (spec.cached_landscape) return spec.cached_landscape;
  if (spec.landscape_path.empty()) throw ConfigError("saps-cached needs a landscape file");
  return std::make_shared<const Landscape>(load_cached_landscape(spec.landscape_path, spec.target_count));
}

}  // namespace

std::vector<int> legal_sizes(Family family) {
  switch (family) {
    case Family::ridge_ea:
    case Family::leadingones_ea:
    case Family::onemax_rls: return range_sizes(5, 50, 5);
    case Family::saps_cached: return range_sizes(48, 480, 16);
    case Family::synthetic: return {};
  }
  return {};
}

ScenarioSpec default_scenario(Family family) {
  ScenarioSpec spec;
  spec.family = family;
  switch (family) {
    case Family::ridge_ea:
    case Family::leadingones_ea:
    case Family::onemax_rls: spec.sizes = range_sizes(5, 50, 5); break;
    case Family::saps_cached: spec.sizes = range_sizes(48, 480, 48); break;
    case Family::synthetic: spec.sizes = {64, 256, 1024}; break;
  }
  spec.max_calls = 1'000'000;
  return spec;
}

void apply_full_scale(ScenarioSpec& spec) {
  spec.runs = 1500;
  spec.repetitions = spec.family == Family::saps_cached ? 500 : 200;
}

void ScenarioSpec::validate() const {
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (runs < 1) throw ConfigError("runs per comparison r must be at least 1");
  if (cutoff && *cutoff < 1) throw ConfigError("cutoff kappa must be at least 1");
  if (n < 1) throw ConfigError("bit-string length n must be at least 1");
  if (max_step && *max_step < 1) throw ConfigError("ell must be at least 1");
  if (target_count < 1) throw ConfigError("target count must be at least 1");
  if (!(sawtooth_alpha >= 1.0)) throw ConfigError("sawtooth alpha must be at least 1");
  op.validate();
  ils.validate();
  if (configurator == ConfiguratorKind::param_ils && op.kind == OperatorKind::random_with_replacement) {
    throw ConfigError("ParamILS scans neighborhoods without replacement; use 'random'");
  }
  if (sizes.empty()) throw ConfigError("the size schedule is empty");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw ConfigError("the size schedule must be strictly increasing");
  }
  const auto legal = legal_sizes(family);
  for (int s : sizes) {
    const bool ok = legal.empty() ? s >= 2 : std::binary_search(legal.begin(), legal.end(), s);
    if (!ok) {
      throw ConfigError("size " + std::to_string(s) + " is not legal for family " + std::string(to_string(family)));
    }
  }
  if (family == Family::saps_cached && !cached_landscape && landscape_path.empty()) {
    throw ConfigError("saps-cached needs a landscape file");
  }
}

ScenarioInstance build_scenario(const ScenarioSpec& spec, int size) {
  const auto legal = legal_sizes(spec.family);
  if (legal.empty() ? size < 2 : !std::binary_search(legal.begin(), legal.end(), size)) {
    throw ConfigError("size " + std::to_string(size) + " is not legal for family " +
                      std::string(to_string(spec.family)));
  }
  OperatorSpec op = spec.op;
  op.max_step = spec.max_step.value_or(family_ell(spec.family));
  EvalProtocol eval;
  eval.cutoff = spec.cutoff.value_or(family_cutoff(spec.family));
  eval.runs = spec.runs;

  switch (spec.family) {
    case Family::ridge_ea: {
      ParameterSpace space({ParameterDim{"chi", size, 0.0, 0.5}});
      eval.target = std::make_shared<OnePlusOneEaTarget>(space, Benchmark::ridge, spec.n, InitRule::ridge_start);
      return {space, eval, {Configuration{2}}, op};
    }
    case Family::leadingones_ea: {
      ParameterSpace space({ParameterDim{"chi", size, 0.1, 0.5}});
      eval.target = std::make_shared<OnePlusOneEaTarget>(space, Benchmark::leadingones, spec.n, InitRule::uniform);
      return {space, eval, {Configuration{3}}, op};
    }
    case Family::onemax_rls: {
      ParameterSpace space({ParameterDim{"k", size, 0.0, 1.0}});
      eval.target = std::make_shared<RlsKTarget>(space, Benchmark::onemax, spec.n);
      return {space, eval, {Configuration{1}}, op};
    }
    case Family::saps_cached: {
      const auto full = saps_landscape(spec);
      if (full->space().dimension_count() != 2) throw ConfigError("saps-cached needs a 2-D (alpha, rho) landscape");
      const int rho_count = full->space().range(1);
      if (size % rho_count != 0) {
        throw ConfigError("size " + std::to_string(size) + " is not a multiple of the " + std::to_string(rho_count) +
                          " rho values");
      }
      const int alpha_count = size / rho_count;
      if (alpha_count < 2 || alpha_count > full->space().range(0)) {
        throw ConfigError("size " + std::to_string(size) + " needs " + std::to_string(alpha_count) +
                          " alpha values; the landscape has " + std::to_string(full->space().range(0)));
      }
      auto sub = std::make_shared<const Landscape>(full->restricted({alpha_count, rho_count}, spec.target_count));
      eval.target = std::make_shared<LandscapeTarget>(sub);
      return {sub->space(), eval, sub->targets(), op};
    }
    case Family::synthetic: {
      Engine rng = make_engine(derive_seed(spec.seed, static_cast<std::uint64_t>(size)));
      auto land = std::make_shared<const Landscape>(
          generate_synthetic(spec.synthetic_kind, size, rng, spec.sawtooth_alpha));
      eval.target = std::make_shared<LandscapeTarget>(land);
      return {land->space(), eval, land->targets(), op};
    }
  }
  throw ConfigError("unknown family");
}

std::uint64_t repetition_seed(const ScenarioSpec& spec, int size, int repetition) {
  const std::string key = std::string(to_string(spec.configurator)) + "/" + operator_label(spec.op);
  const auto per_operator = derive_seed(spec.seed, hash_tag(key));
  return derive_seed(derive_seed(per_operator, static_cast<std::uint64_t>(size)),
                     static_cast<std::uint64_t>(repetition));
}

namespace {

std::string sanitize(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return text;
}

}  // namespace

std::vector<TrialRecord> run_scenario(const ScenarioSpec& spec) {
  spec.validate();
  std::vector<ScenarioInstance> instances;
  instances.reserve(spec.sizes.size());
  for (int size : spec.sizes) instances.push_back(build_scenario(spec, size));

  const auto reps = static_cast<std::size_t>(spec.repetitions);
  std::vector<TrialRecord> records(instances.size() * reps);
  const std::string label = operator_label(spec.op);
  const std::string mode = accounting_mode(spec.op);

  detail::parallel_for(records.size(), static_cast<int>(worker_threads(spec.threads)), [&](std::size_t job) {
    const auto& inst = instances[job / reps];
    const int size = spec.sizes[job / reps];
    const int rep = static_cast<int>(job % reps);
    TrialRecord& rec = records[job];
    rec.family = std::string(to_string(spec.family));
    rec.configurator = std::string(to_string(spec.configurator));
    rec.op = label;
    rec.space_size = size;
    rec.repetition = rep;
    rec.seed = repetition_seed(spec, size, rep);
    rec.accounting_mode = mode;
    try {
      StopRule stop = StopRule::first_target_sampled(inst.targets);
      if (spec.max_calls > 0) stop.with_budget(spec.max_calls);
      RunTrace trace;
      if (spec.configurator == ConfiguratorKind::param_rls) {
        RlsOptions options;
        options.accept_ties = spec.accept_ties;
        trace = run_param_rls(inst.space, inst.op, inst.eval, stop, rec.seed, options);
      } else {
        trace = run_param_ils(inst.space, spec.ils, inst.op, inst.eval, stop, rec.seed);
      }
      if (trace.first_sampled_optimum_at) {
        rec.better_calls = *trace.first_sampled_optimum_at;
      } else {
        rec.accounting_mode = "failed:call budget of " + std::to_string(spec.max_calls) + " exhausted";
      }
    } catch (const std::exception& e) {
      rec.better_calls.reset();
      rec.accounting_mode = sanitize("failed:" + std::string(e.what()));
    }
  });
  return records;
}

std::vector<std::string> scenario_metadata(const ScenarioSpec& spec) {
  std::vector<std::string> out;
  auto add = [&](const std::string& key, const std::string& value) { out.push_back(key + "=" + value); };
  add("family", std::string(to_string(spec.family)));
  add("configurator", std::string(to_string(spec.configurator)));
  add("operator", operator_label(spec.op));
  if (spec.op.kind == OperatorKind::l_step) add("ell", std::to_string(spec.max_step.value_or(family_ell(spec.family))));
  if (spec.op.kind == OperatorKind::harmonic) add("direction", std::string(to_string(spec.op.direction)));
  add("accounting_mode", accounting_mode(spec.op));
  add("runs", std::to_string(spec.runs));
  add("cutoff", std::to_string(spec.cutoff.value_or(family_cutoff(spec.family))));
  if (is_benchmark(spec.family)) add("n", std::to_string(spec.n));
  add("repetitions", std::to_string(spec.repetitions));
  add("seed", std::to_string(spec.seed));
  std::string sizes;
  for (int s : spec.sizes) sizes += (sizes.empty() ? "" : ";") + std::to_string(s);
  add("sizes", sizes);
  add("accept_ties", spec.accept_ties ? "true" : "false");
  add("max_calls", std::to_string(spec.max_calls));
  if (spec.configurator == ConfiguratorKind::param_ils) {
    add("ils.R", std::to_string(spec.ils.initial_samples));
    add("ils.s", std::to_string(spec.ils.perturbation_strength) + (spec.ils_s_defaulted ? " (assumed default)" : ""));
    add("ils.p_restart", csv::format_double(spec.ils.restart_probability) +
                             (spec.ils_restart_defaulted ? " (assumed default)" : ""));
    add("ils.discovered_scope", "global per run; cleared on restart");
  }
  if (spec.family == Family::saps_cached) {
    add("landscape", spec.landscape_path.empty() ? "<in-memory>" : spec.landscape_path);
    add("target_count", std::to_string(spec.target_count));
    add("saps.tie_breaking", "uniform among best improving flips");
    add("saps.ps", "per scaling event");
    add("saps.step", "one flip or one scaling event");
  }
  if (spec.family == Family::synthetic) {
    add("synthetic", std::string(to_string(spec.synthetic_kind)));
    if (spec.synthetic_kind == SyntheticKind::sawtooth) add("sawtooth_alpha", csv::format_double(spec.sawtooth_alpha));
  }
  return out;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records, std::string_view baseline,
                                  std::string_view candidate) {
  using Key = std::tuple<std::string, std::string, int>;
  std::map<Key, std::pair<std::vector<double>, std::vector<double>>> groups;
  std::map<Key, std::pair<bool, bool>> present;
  for (const auto& r : records) {
    const bool is_base = r.op == baseline;
    const bool is_cand = r.op == candidate;
    if (!is_base && !is_cand) continue;
    const Key key{r.family, r.configurator, r.space_size};
    auto& seen = present[key];
    auto& g = groups[key];
    if (is_base) seen.first = true;
    if (is_cand) seen.second = true;
    if (!r.better_calls) continue;
    const double v = static_cast<double>(*r.better_calls);
    if (is_base) g.first.push_back(v);
    if (is_cand) g.second.push_back(v);
  }
  std::string gaps;
  for (const auto& [key, seen] : present) {
    if (seen.first && seen.second) continue;
    gaps += " " + std::get<0>(key) + "/" + std::get<1>(key) + "/" + std::to_string(std::get<2>(key)) + " lacks " +
            std::string(seen.first ? candidate : baseline) + ";";
  }
  if (!gaps.empty()) throw ConfigError("unpaired records:" + gaps);

  std::vector<SummaryRow> rows;
  for (const auto& [key, g] : groups) {
    auto make = [&](std::string_view op, const std::vector<double>& xs) {
      SummaryRow row;
      row.family = std::get<0>(key);
      row.configurator = std::get<1>(key);
      row.op = std::string(op);
      row.space_size = std::get<2>(key);
      row.n = xs.size();
      if (!xs.empty()) {
        row.mean = mean(xs);
        row.stderr_ = standard_error(xs);
      }
      return row;
    };
    rows.push_back(make(baseline, g.first));
    SummaryRow cand = make(candidate, g.second);
    if (!g.first.empty() && !g.second.empty()) {
      const auto report = compare_samples(g.first, g.second);
      cand.p_value = report.p_value;
      cand.cliffs_delta = report.cliffs_delta;
    }
    rows.push_back(std::move(cand));
  }
  return rows;
}

namespace {

constexpr std::string_view kRawHeader =
    "family,configurator,operator,space_size,repetition,seed,better_calls,accounting_mode";
constexpr std::string_view kSummaryHeader = "family,configurator,operator,space_size,mean,stderr,p_value,cliffs_delta,n";

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

}  // namespace

void emit_raw_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
  std::vector<const TrialRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](const TrialRecord* a, const TrialRecord* b) {
    return std::tie(a->family, a->configurator, a->op, a->space_size, a->repetition) <
           std::tie(b->family, b->configurator, b->op, b->space_size, b->repetition);
  });
  out << kRawHeader << '\n';
  for (const auto* r : sorted) {
    out << r->family << ',' << r->configurator << ',' << r->op << ',' << r->space_size << ',' << r->repetition << ','
        << r->seed << ',';
    if (r->better_calls) out << *r->better_calls;
    out << ',' << sanitize(r->accounting_mode) << '\n';
  }
}

void emit_raw_csv(const std::vector<TrialRecord>& records, const std::string& path) {
  auto out = open_output(path);
  emit_raw_csv(records, out);
  finish_output(out, path);
}

std::vector<TrialRecord> parse_raw_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRawHeader) throw ParseError("unexpected header '" + line + "'", line_no);
  std::vector<TrialRecord> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = csv::split(line);
    if (f.size() != 8) throw ParseError("expected 8 fields, found " + std::to_string(f.size()), line_no);
    TrialRecord r;
    try {
      r.family = f[0];
      r.configurator = f[1];
      r.op = f[2];
      r.space_size = static_cast<int>(csv::parse_int(f[3]));
      r.repetition = static_cast<int>(csv::parse_int(f[4]));
      std::istringstream seed(f[5]);
      if (!(seed >> r.seed) || !seed.eof()) throw std::invalid_argument("bad seed '" + f[5] + "'");
      if (!f[6].empty()) {
        const long long calls = csv::parse_int(f[6]);
        if (calls < 0) throw std::invalid_argument("negative better_calls");
        r.better_calls = static_cast<std::uint64_t>(calls);
      }
      r.accounting_mode = f[7];
    } catch (const std::exception& e) {
      throw ParseError(e.what(), line_no);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TrialRecord> load_raw_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return parse_raw_csv(in);
}

void emit_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << r.family << ',' << r.configurator << ',' << r.op << ',' << r.space_size << ',';
    if (r.n > 0) out << csv::format_double(r.mean) << ',' << csv::format_double(r.stderr_);
    else out << ',';
    out << ',';
    if (r.p_value) out << csv::format_double(*r.p_value);
    out << ',';
    if (r.cliffs_delta) out << csv::format_double(*r.cliffs_delta);
    out << ',' << r.n << '\n';
  }
}

void emit_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
  auto out = open_output(path);
  emit_summary_csv(rows, out);
  finish_output(out, path);
}

unsigned worker_threads(unsigned requested) {
  return static_cast<unsigned>(detail::resolve_threads(static_cast<int>(requested)));
}

}  // namespace ptune
