#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ptune/evaluation.hpp"
#include "ptune/landscape.hpp"
#include "ptune/rng.hpp"
#include "ptune/space.hpp"

namespace ptune {

struct CnfFormula {
  int num_vars = 0;
  /// Non-empty clauses of signed 1-based variable indices.
  std::vector<std::vector<int>> clauses;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

/// DIMACS CNF: `c` comment lines, one `p cnf V C` header, zero-terminated
/// clauses that may span lines. A trailing `%` line (SATLIB) ends the body.
/// Throws ParseError with the offending line.
CnfFormula parse_dimacs(std::string_view text);
CnfFormula load_dimacs(const std::string& path);
std::string to_dimacs(const CnfFormula& formula);

/// Clauses with at least one true literal; assignment[v-1] is variable v.
/// Throws ContractViolation on a length mismatch.
int count_satisfied(const CnfFormula& formula, std::span<const std::uint8_t> assignment);

struct SapsParams {
  double alpha_s = 1.3;  // scaling factor
  double rho = 0.8;      // smoothing factor
  double ps = 0.05;      // smoothing probability per scaling event
  double wp = 0.01;      // random-walk probability

  void validate() const;
};

/// Clause weights of SAPS with multiplicative scaling and smoothing towards
/// the mean. Weights are renormalized by a common factor when they grow
/// large, which leaves every SAPS decision unchanged.
class ClauseWeights {
 public:
  explicit ClauseWeights(std::size_t clauses) : w_(clauses, 1.0) {}

  double operator[](std::size_t c) const { return w_[c]; }
  std::size_t size() const { return w_.size(); }
  std::span<const double> values() const { return w_; }

  void scale(std::span<const int> clauses, double alpha);
  /// w <- rho * w + (1 - rho) * mean(w) for every clause.
  void smooth(double rho);

 private:
  void renormalize_if_needed();
  std::vector<double> w_;
};

struct SapsStep {
  int step = 0;
  int satisfied = 0;
  int best = 0;
};
using SapsObserver = std::function<void(const SapsStep&, const ClauseWeights&)>;

/// SAPS run for `cutoff` steps (a step is one flip or one scaling event);
/// returns the best number of satisfied clauses seen. Stops early once
/// every clause is satisfied.
int run_saps(const CnfFormula& formula, const SapsParams& params, int cutoff, Engine& rng,
             const SapsObserver& observer = {});

struct PlantedInstance {
  CnfFormula formula;
  std::vector<std::uint8_t> solution;
};

/// Random 3-SAT over distinct variables per clause, each clause satisfied by
/// a uniformly drawn hidden assignment.
PlantedInstance generate_planted_3sat(int vars, int clauses, Engine& rng);

/// The (alpha_s, rho) grid: alpha_s in {16/15, 17/15, ...} and rho in
/// {0, 1/15, ...}.
ParameterSpace saps_grid(int alpha_count, int rho_count);

/// SAPS configured by the decoded (alpha_s, rho) of a 2-D configuration;
/// ps and wp stay fixed. Instances are the given formulas.
class SapsTarget final : public TargetAlgorithm {
 public:
  SapsTarget(ParameterSpace grid, std::vector<CnfFormula> instances, SapsParams base = {});
  std::string id() const override { return "saps"; }
  std::size_t instance_count() const override { return instances_.size(); }
  double run(const Configuration& c, std::size_t instance, int cutoff,
             std::uint64_t seed) const override;

 private:
  ParameterSpace grid_;
  std::vector<CnfFormula> instances_;
  SapsParams base_;
};

/// Mean best satisfied-clause count of every grid cell over
/// instances x reps runs. Throws ConfigError if reps < 1 or the grid is not 2-D.
Landscape evaluate_saps_landscape(std::span<const CnfFormula> instances, const ParameterSpace& grid,
                                  int reps, int cutoff, std::uint64_t seed,
                                  const SapsParams& base = {}, std::size_t target_count = 5);

}  // namespace ptune
