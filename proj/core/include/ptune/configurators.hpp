#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ptune/evaluation.hpp"
#include "ptune/operators.hpp"
#include "ptune/rng.hpp"
#include "ptune/space.hpp"

namespace ptune {

/// When a configurator run halts. A run with targets halts the moment any
/// target is generated; the better() call that would have evaluated it is
/// not counted. A budget halts before call number max_calls + 1.
class StopRule {
 public:
  /// Throws ConfigError if `targets` is empty.
  static StopRule first_target_sampled(std::vector<Configuration> targets);
  /// Throws ConfigError if max_calls < 1.
  static StopRule call_budget(std::uint64_t max_calls);

  /// Adds a safety budget to a target-based rule.
  StopRule& with_budget(std::uint64_t max_calls);

  bool has_targets() const { return !targets_.empty(); }
  bool is_target(const Configuration& c) const;
  const std::vector<Configuration>& targets() const { return targets_; }
  const std::optional<std::uint64_t>& max_calls() const { return max_calls_; }

 private:
  std::vector<Configuration> targets_;  // sorted
  std::optional<std::uint64_t> max_calls_;
};

struct RunTrace {
  std::uint64_t better_calls = 0;
  /// Value of better_calls when a target was first generated.
  std::optional<std::uint64_t> first_sampled_optimum_at;
  /// (better_calls, incumbent) at every incumbent change, when recorded.
  std::vector<std::pair<std::uint64_t, Configuration>> incumbent_history;
  Configuration final_incumbent;
};

/// Thrown inside a run when the stop rule fires; caught by the run_* drivers.
struct RunStopped {};

/// Per-run state shared by every better() call site: the call counter,
/// the stop rule and the run's random stream.
class RunContext final : public MutationContext {
 public:
  RunContext(const ParameterSpace& space, const EvalProtocol& eval, const StopRule& stop,
             std::uint64_t seed, bool record_history = false);

  /// Counted better(first, second) == Winner::second.
  bool prefers_second(const Configuration& first, const Configuration& second) override;
  /// True iff `candidate` strictly beats `reference` (one counted call).
  bool improves(const Configuration& candidate, const Configuration& reference) {
    return prefers_second(reference, candidate);
  }
  /// Throws RunStopped if `c` is a target.
  void observe(const Configuration& c) override;
  void record_incumbent(const Configuration& c);

  const ParameterSpace& space() const { return *space_; }
  Engine& rng() { return rng_; }
  const RunTrace& trace() const { return trace_; }
  RunTrace& trace() { return trace_; }

 private:
  const ParameterSpace* space_;
  const EvalProtocol* eval_;
  const StopRule* stop_;
  std::uint64_t call_seed_root_;
  Engine rng_;
  bool record_history_;
  RunTrace trace_;
};

struct RlsOptions {
  /// On equal performance the candidate replaces the incumbent.
  bool accept_ties = true;
  bool record_history = false;
};

/// ParamRLS: uniform start, then mutate and keep the better of incumbent
/// and candidate until the stop rule fires. With the harmonic operator this
/// is ParamHS.
RunTrace run_param_rls(const ParameterSpace& space, const OperatorSpec& op, const EvalProtocol& eval,
                       const StopRule& stop, std::uint64_t seed, const RlsOptions& options = {});

struct ParamIlsSettings {
  int initial_samples = 0;          // R
  int perturbation_strength = 3;    // s
  double restart_probability = 0.01;

  void validate() const;
};

/// Configurations evaluated so far in the current ParamILS run.
class DiscoveredSet {
 public:
  explicit DiscoveredSet(const ParameterSpace& space) : space_(&space) {}
  bool contains(const Configuration& c) const { return seen_.count(space_->linear_index(c)) != 0; }
  void insert(const Configuration& c) { seen_.insert(space_->linear_index(c)); }
  void clear() { seen_.clear(); }
  std::size_t size() const { return seen_.size(); }

 private:
  const ParameterSpace* space_;
  std::unordered_set<std::uint64_t> seen_;
};

/// Undiscovered neighbors of `c` in the order a first-improvement scan
/// visits them. random: uniform permutation of the full neighborhood;
/// l_step: uniform permutation of neighbors within max_step; harmonic:
/// weighted permutation with weight 1/(D * d * H_{phi_i-1}) for a neighbor
/// at distance d in dimension i, i.e. the harmonic operator's proposal law
/// sampled without replacement.
std::vector<Configuration> scan_order(const Mutator& mutator, const Configuration& c,
                                      const DiscoveredSet& discovered, Engine& rng);

/// Moves to the first strictly improving undiscovered neighbor until none
/// improves, then returns the current configuration.
Configuration iterative_first_improvement(const Configuration& start, const Mutator& mutator,
                                          DiscoveredSet& discovered, RunContext& context);

/// ParamILS (BasicILS: fixed r per comparison). The operator selects the
/// perturbation move and the local-search scan order.
RunTrace run_param_ils(const ParameterSpace& space, const ParamIlsSettings& settings,
                       const OperatorSpec& op, const EvalProtocol& eval, const StopRule& stop,
                       std::uint64_t seed, bool record_history = false);

}  // namespace ptune
