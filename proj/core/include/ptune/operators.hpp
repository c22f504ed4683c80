#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ptune/rng.hpp"
#include "ptune/space.hpp"

namespace ptune {

/// Step-size distribution P(d) = 1 / (d * H_{phi-1}) over d in 1..phi-1.
class HarmonicDistribution {
 public:
  /// Throws ConfigError if range < 2.
  explicit HarmonicDistribution(int range);

  int range() const { return range_; }
  /// H_{phi-1}.
  double harmonic_number() const { return harmonic_; }
  double probability(int step) const;
  /// Cumulative weights; entry d-1 is P(step <= d). The last entry is 1.
  const std::vector<double>& cumulative() const { return cumulative_; }

  int sample(Engine& rng) const;

 private:
  int range_;
  double harmonic_;
  std::vector<double> cumulative_;
};

enum class OperatorKind {
  l_step,
  random,                   // uniform new value, without replacement
  random_with_replacement,  // uniform new value, with replacement
  harmonic,
};

enum class DirectionMode {
  random_direction,  // one feasible point at distance d, direction u.a.r.
  best_of_both,      // compare both feasible points at distance d
};

std::string_view to_string(OperatorKind kind);
std::string_view to_string(DirectionMode mode);
/// Accepts "lstep", "random", "random-wr", "harmonic".
OperatorKind parse_operator_kind(std::string_view text);
/// Accepts "random-direction", "best-of-both".
DirectionMode parse_direction_mode(std::string_view text);

struct OperatorSpec {
  OperatorKind kind = OperatorKind::l_step;
  int max_step = 1;  // ell, for the l-step operator
  DirectionMode direction = DirectionMode::random_direction;

  void validate() const;
};

/// Callbacks a mutation may need from the configurator running it.
class MutationContext {
 public:
  virtual ~MutationContext() = default;
  /// One counted better() call; true iff `second` strictly wins.
  virtual bool prefers_second(const Configuration& first, const Configuration& second) = 0;
  /// Every configuration a mutation generates is reported here.
  virtual void observe(const Configuration&) {}
};

/// Thrown by without-replacement sampling when every value of the chosen
/// dimension has already been proposed in this run.
class NeighborhoodExhausted : public std::runtime_error {
 public:
  explicit NeighborhoodExhausted(std::size_t dimension)
      : std::runtime_error("neighborhood exhausted in dimension " + std::to_string(dimension)),
        dimension_(dimension) {}
  std::size_t dimension() const noexcept { return dimension_; }

 private:
  std::size_t dimension_;
};

/// Per-run memory of values already proposed in each dimension.
class OperatorState {
 public:
  explicit OperatorState(const ParameterSpace& space);

  bool was_proposed(std::size_t dim, int value) const;
  void mark(std::size_t dim, int value);
  std::size_t proposed_count(std::size_t dim) const;
  void reset();
  void reset_dimension(std::size_t dim);

 private:
  std::vector<std::vector<bool>> proposed_;
};

/// Moves one uniformly chosen dimension by +-d with d uniform in 1..max_step.
/// Infeasible (dimension, d, direction) draws are rejected and redrawn.
Configuration mutate_l_step(const ParameterSpace& space, const Configuration& c, int max_step,
                            Engine& rng);

/// Reassigns one uniformly chosen dimension to a uniformly chosen different
/// value. Without replacement the current value and every earlier proposal are
/// excluded and the new proposal is recorded in `state`.
/// Throws NeighborhoodExhausted if no eligible value is left.
Configuration mutate_random(const ParameterSpace& space, const Configuration& c, OperatorState& state,
                            bool without_replacement, Engine& rng);

/// Harmonic-step mutation. `steps` holds one distribution per dimension.
/// best_of_both requires a context; the intra-mutation comparison is a
/// counted better() call.
Configuration mutate_harmonic(const ParameterSpace& space,
                              std::span<const HarmonicDistribution> steps, const Configuration& c,
                              DirectionMode mode, MutationContext* context, Engine& rng);

/// Uniform member of neighborhood(space, c), without materializing it.
Configuration random_neighbor(const ParameterSpace& space, const Configuration& c, Engine& rng);

/// Binds an operator to a space together with its per-run state.
class Mutator {
 public:
  Mutator(const ParameterSpace& space, OperatorSpec spec);

  const OperatorSpec& spec() const { return spec_; }
  const ParameterSpace& space() const { return *space_; }
  std::span<const HarmonicDistribution> harmonic() const { return harmonic_; }

  /// Produces a candidate differing from `c` in exactly one dimension.
  /// Without-replacement exhaustion of a dimension clears that dimension's
  /// memory (keeping the current value) and redraws.
  Configuration mutate(const Configuration& c, MutationContext& context, Engine& rng);

  /// Forget all without-replacement memory, e.g. on a random restart.
  void reset() { state_.reset(); }
  const OperatorState& state() const { return state_; }

 private:
  const ParameterSpace* space_;
  OperatorSpec spec_;
  std::vector<HarmonicDistribution> harmonic_;
  OperatorState state_;
};

}  // namespace ptune
