#include "ptune/sat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "parallel.hpp"
#include "ptune/errors.hpp"

namespace ptune {

CnfFormula parse_dimacs(std::string_view text) {
  CnfFormula f;
  bool have_header = false;
  long long declared_clauses = 0;
  std::vector<int> pending;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;

    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    const char lead = line[first];
    if (lead == 'c') continue;
    if (lead == '%') break;
    if (lead == 'p') {
      if (have_header) throw ParseError("duplicate problem line", line_no);
      std::istringstream in{std::string(line.substr(first))};
      std::string p, fmt, extra;
      long long vars = -1;
      if (!(in >> p >> fmt >> vars >> declared_clauses) || p != "p" || fmt != "cnf" || (in >> extra)) {
        throw ParseError("expected 'p cnf <vars> <clauses>'", line_no);
      }
      if (vars < 0 || declared_clauses < 0 || vars > 100'000'000) {
        throw ParseError("negative or oversized counts in problem line", line_no);
      }
      f.num_vars = static_cast<int>(vars);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("clause before the problem line", line_no);

    std::istringstream in{std::string(line)};
    std::string token;
    while (in >> token) {
      long long lit = 0;
      char* end = nullptr;
      lit = std::strtoll(token.c_str(), &end, 10);
      if (end == token.c_str() || *end != '\0') throw ParseError("invalid literal '" + token + "'", line_no);
      if (lit == 0) {
        if (pending.empty()) throw ParseError("empty clause", line_no);
        f.clauses.push_back(std::move(pending));
        pending.clear();
        continue;
      }
      if (std::llabs(lit) > f.num_vars) {
        throw ParseError("literal " + token + " exceeds the " + std::to_string(f.num_vars) + " declared variables",
                         line_no);
      }
      pending.push_back(static_cast<int>(lit));
    }
  }
  const std::size_t last = std::max<std::size_t>(line_no, 1);
  if (!have_header) throw ParseError("missing problem line", last);
  if (!pending.empty()) throw ParseError("last clause is not terminated by 0", last);
  if (static_cast<long long>(f.clauses.size()) != declared_clauses) {
    throw ParseError("problem line declares " + std::to_string(declared_clauses) + " clauses but " +
                         std::to_string(f.clauses.size()) + " were found",
                     last);
  }
  return f;
}

CnfFormula load_dimacs(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open DIMACS file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dimacs(buf.str());
}

std::string to_dimacs(const CnfFormula& formula) {
  std::ostringstream out;
  out << "p cnf " << formula.num_vars << ' ' << formula.clauses.size() << '\n';
  for (const auto& clause : formula.clauses) {
    for (int lit : clause) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

int count_satisfied(const CnfFormula& formula, std::span<const std::uint8_t> assignment) {
  if (assignment.size() != static_cast<std::size_t>(formula.num_vars)) {
    throw ContractViolation("assignment length differs from the variable count");
  }
  int sat = 0;
  for (const auto& clause : formula.clauses) {
    for (int lit : clause) {
      const bool value = assignment[static_cast<std::size_t>(std::abs(lit) - 1)] != 0;
      if (value == (lit > 0)) {
        ++sat;
        break;
      }
    }
  }
  return sat;
}

void SapsParams::validate() const {
  if (!(alpha_s > 1.0) || !std::isfinite(alpha_s)) throw ConfigError("SAPS alpha must exceed 1");
  if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("SAPS rho must lie in [0, 1]");
  if (!(ps >= 0.0 && ps <= 1.0)) throw ConfigError("SAPS ps must lie in [0, 1]");
  if (!(wp >= 0.0 && wp <= 1.0)) throw ConfigError("SAPS wp must lie in [0, 1]");
}

void ClauseWeights::scale(std::span<const int> clauses, double alpha) {
  for (int c : clauses) w_[static_cast<std::size_t>(c)] *= alpha;
  renormalize_if_needed();
}

void ClauseWeights::smooth(double rho) {
  if (w_.empty()) return;
  double sum = 0.0;
  for (double w : w_) sum += w;
  const double pull = (1.0 - rho) * (sum / static_cast<double>(w_.size()));
  for (double& w : w_) w = rho * w + pull;
}

void ClauseWeights::renormalize_if_needed() {
  constexpr double kLimit = 1e200;
  const double top = *std::max_element(w_.begin(), w_.end());
  if (top > kLimit) {
    for (double& w : w_) w /= top;
  }
}

namespace {

struct Occurrence {
  int clause;
  bool positive;
};

class SapsState {
 public:
  SapsState(const CnfFormula& f, Engine& rng)
      : f_(f), occ_(static_cast<std::size_t>(f.num_vars) + 1), weights_(f.clauses.size()),
        true_count_(f.clauses.size(), 0), unsat_pos_(f.clauses.size(), -1),
        assign_(static_cast<std::size_t>(f.num_vars) + 1, 0), stamp_(static_cast<std::size_t>(f.num_vars) + 1, 0) {
    for (std::size_t c = 0; c < f.clauses.size(); ++c) {
      for (int lit : f.clauses[c]) occ_[static_cast<std::size_t>(std::abs(lit))].push_back({static_cast<int>(c), lit > 0});
    }
    for (int v = 1; v <= f.num_vars; ++v) assign_[static_cast<std::size_t>(v)] = bernoulli(rng, 0.5) ? 1 : 0;
    for (std::size_t c = 0; c < f.clauses.size(); ++c) {
      for (int lit : f.clauses[c]) {
        if (literal_true(lit)) ++true_count_[c];
      }
      if (true_count_[c] == 0) add_unsat(static_cast<int>(c));
    }
  }

  int satisfied() const { return static_cast<int>(f_.clauses.size() - unsat_.size()); }
  const std::vector<int>& unsat() const { return unsat_; }
  ClauseWeights& weights() { return weights_; }

  // Change in weighted unsatisfied cost when flipping v.
  double delta(int v) const {
    double d = 0.0;
    const bool value = assign_[static_cast<std::size_t>(v)] != 0;
    for (const auto& o : occ_[static_cast<std::size_t>(v)]) {
      const int tc = true_count_[static_cast<std::size_t>(o.clause)];
      if (tc == 0) {
        d -= weights_[static_cast<std::size_t>(o.clause)];
      } else if (tc == 1 && value == o.positive) {
        d += weights_[static_cast<std::size_t>(o.clause)];
      }
    }
    return d;
  }

  void flip(int v) {
    auto& value = assign_[static_cast<std::size_t>(v)];
    value ^= 1;
    for (const auto& o : occ_[static_cast<std::size_t>(v)]) {
      auto& tc = true_count_[static_cast<std::size_t>(o.clause)];
      if ((value != 0) == o.positive) {
        if (tc++ == 0) remove_unsat(o.clause);
      } else {
        if (--tc == 0) add_unsat(o.clause);
      }
    }
  }

  // Variables occurring in unsatisfied clauses, each once.
  const std::vector<int>& candidates() {
    ++epoch_;
    cand_.clear();
    for (int c : unsat_) {
      for (int lit : f_.clauses[static_cast<std::size_t>(c)]) {
        const auto v = static_cast<std::size_t>(std::abs(lit));
        if (stamp_[v] != epoch_) {
          stamp_[v] = epoch_;
          cand_.push_back(std::abs(lit));
        }
      }
    }
    return cand_;
  }

 private:
  bool literal_true(int lit) const { return (assign_[static_cast<std::size_t>(std::abs(lit))] != 0) == (lit > 0); }
  void add_unsat(int c) {
    unsat_pos_[static_cast<std::size_t>(c)] = static_cast<int>(unsat_.size());
    unsat_.push_back(c);
  }
  void remove_unsat(int c) {
    const int at = unsat_pos_[static_cast<std::size_t>(c)];
    const int moved = unsat_.back();
    unsat_[static_cast<std::size_t>(at)] = moved;
    unsat_pos_[static_cast<std::size_t>(moved)] = at;
    unsat_.pop_back();
    unsat_pos_[static_cast<std::size_t>(c)] = -1;
  }

  const CnfFormula& f_;
  std::vector<std::vector<Occurrence>> occ_;
  ClauseWeights weights_;
  std::vector<int> true_count_;
  std::vector<int> unsat_;
  std::vector<int> unsat_pos_;
  std::vector<std::uint8_t> assign_;
  std::vector<unsigned> stamp_;
  unsigned epoch_ = 0;
  std::vector<int> cand_;
};

}  // namespace

int run_saps(const CnfFormula& formula, const SapsParams& params, int cutoff, Engine& rng,
             const SapsObserver& observer) {
  params.validate();
  if (cutoff < 1) throw ConfigError("SAPS cutoff must be at least 1");
  SapsState state(formula, rng);
  int best = state.satisfied();
  std::vector<int> ties;
  for (int step = 1; step <= cutoff && !state.unsat().empty(); ++step) {
    double best_delta = 0.0;
    ties.clear();
    for (int v : state.candidates()) {
      const double d = state.delta(v);
      if (d < best_delta) {
        best_delta = d;
        ties.assign(1, v);
      } else if (d == best_delta && !ties.empty()) {
        ties.push_back(v);
      }
    }
    if (!ties.empty()) {
      state.flip(ties[uniform_int<std::size_t>(rng, 0, ties.size() - 1)]);
    } else if (bernoulli(rng, params.wp)) {
      const auto& unsat = state.unsat();
      const auto& clause = formula.clauses[static_cast<std::size_t>(unsat[uniform_int<std::size_t>(rng, 0, unsat.size() - 1)])];
      state.flip(std::abs(clause[uniform_int<std::size_t>(rng, 0, clause.size() - 1)]));
    } else {
      state.weights().scale(state.unsat(), params.alpha_s);
      if (bernoulli(rng, params.ps)) state.weights().smooth(params.rho);
    }
    best = std::max(best, state.satisfied());
    if (observer) observer(SapsStep{step, state.satisfied(), best}, state.weights());
  }
  return best;
}

PlantedInstance generate_planted_3sat(int vars, int clauses, Engine& rng) {
  if (vars < 3) throw ConfigError("planted 3-SAT needs at least 3 variables");
  if (clauses < 1) throw ConfigError("planted 3-SAT needs at least 1 clause");
  PlantedInstance out;
  out.formula.num_vars = vars;
  out.solution.resize(static_cast<std::size_t>(vars));
  for (auto& b : out.solution) b = bernoulli(rng, 0.5) ? 1 : 0;
  out.formula.clauses.reserve(static_cast<std::size_t>(clauses));
  for (int c = 0; c < clauses; ++c) {
    int picked[3];
    for (int k = 0; k < 3; ++k) {
      bool fresh = false;
      while (!fresh) {
        picked[k] = uniform_int(rng, 1, vars);
        fresh = std::find(picked, picked + k, picked[k]) == picked + k;
      }
    }
    std::vector<int> clause(3);
    bool satisfied = false;
    while (!satisfied) {
      for (int k = 0; k < 3; ++k) {
        const bool positive = bernoulli(rng, 0.5);
        clause[static_cast<std::size_t>(k)] = positive ? picked[k] : -picked[k];
        satisfied = satisfied || (out.solution[static_cast<std::size_t>(picked[k] - 1)] != 0) == positive;
      }
    }
    out.formula.clauses.push_back(std::move(clause));
  }
  return out;
}

ParameterSpace saps_grid(int alpha_count, int rho_count) {
  if (rho_count > 16) throw ConfigError("rho takes at most 16 values in [0, 1]");
  return ParameterSpace({ParameterDim{"alpha", alpha_count, 1.0, 1.0 / 15.0},
                         ParameterDim{"rho", rho_count, -1.0 / 15.0, 1.0 / 15.0}});
}

namespace {

SapsParams params_for(const ParameterSpace& grid, const Configuration& c, SapsParams base) {
  base.alpha_s = grid.dim(0).decode(c[0]);
  base.rho = std::clamp(grid.dim(1).decode(c[1]), 0.0, 1.0);
  return base;
}

void require_saps_grid(const ParameterSpace& grid) {
  if (grid.dimension_count() != 2) throw ConfigError("the SAPS grid must be two-dimensional (alpha, rho)");
}

}  // namespace

SapsTarget::SapsTarget(ParameterSpace grid, std::vector<CnfFormula> instances, SapsParams base)
    : grid_(std::move(grid)), instances_(std::move(instances)), base_(base) {
  require_saps_grid(grid_);
  if (instances_.empty()) throw ConfigError("SAPS target needs at least one instance");
  base_.validate();
}

double SapsTarget::run(const Configuration& c, std::size_t instance, int cutoff, std::uint64_t seed) const {
  if (instance >= instances_.size()) throw EvaluationError("no such instance", instance);
  Engine rng = make_engine(seed);
  try {
    return run_saps(instances_[instance], params_for(grid_, c, base_), cutoff, rng);
  } catch (const ConfigError& e) {
    throw EvaluationError(e.what(), instance);
  }
}

Landscape evaluate_saps_landscape(std::span<const CnfFormula> instances, const ParameterSpace& grid, int reps,
                                  int cutoff, std::uint64_t seed, const SapsParams& base,
                                  std::size_t target_count) {
  require_saps_grid(grid);
  if (reps < 1) throw ConfigError("landscape evaluation needs reps >= 1");
  if (cutoff < 1) throw ConfigError("landscape evaluation needs cutoff >= 1");
  if (instances.empty()) throw ConfigError("landscape evaluation needs at least one instance");
  if (target_count == 0) throw ConfigError("target count must be at least 1");
  base.validate();
  std::vector<double> quality(grid.cardinality());
  detail::parallel_for(quality.size(), detail::resolve_threads(0), [&](std::size_t cell) {
    const Configuration c = grid.at(cell);
    const SapsParams p = params_for(grid, c, base);
    const std::uint64_t cell_seed = derive_seed(seed, cell);
    double sum = 0.0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
      for (int r = 0; r < reps; ++r) {
        Engine rng = make_engine(derive_seed(derive_seed(cell_seed, i), static_cast<std::uint64_t>(r)));
        sum += run_saps(instances[i], p, cutoff, rng);
      }
    }
    quality[cell] = sum / (static_cast<double>(instances.size()) * reps);
  });
  Landscape tmp(grid, quality, Landscape::Kind::cached);
  auto targets = tmp.top(target_count);
  return Landscape(grid, std::move(quality), Landscape::Kind::cached, std::move(targets));
}

}  // namespace ptune
