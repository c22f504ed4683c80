#include "ptune/operators.hpp"

#include <algorithm>

#include "ptune/errors.hpp"

namespace ptune {

HarmonicDistribution::HarmonicDistribution(int range) : range_(range), harmonic_(0.0) {
  if (range < 2) throw ConfigError("harmonic step distribution needs a range of at least 2");
  for (int d = 1; d < range; ++d) harmonic_ += 1.0 / d;
  cumulative_.resize(static_cast<std::size_t>(range - 1));
  double acc = 0.0;
  for (int d = 1; d < range; ++d) {
    acc += 1.0 / (d * harmonic_);
    cumulative_[static_cast<std::size_t>(d - 1)] = acc;
  }
  cumulative_.back() = 1.0;
}

double HarmonicDistribution::probability(int step) const {
  if (step < 1 || step >= range_) return 0.0;
  return 1.0 / (step * harmonic_);
}

int HarmonicDistribution::sample(Engine& rng) const {
  const double u = uniform01(rng);
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto d = static_cast<int>(it - cumulative_.begin()) + 1;
  return std::min(d, range_ - 1);
}

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::l_step: return "lstep";
    case OperatorKind::random: return "random";
    case OperatorKind::random_with_replacement: return "random-wr";
    case OperatorKind::harmonic: return "harmonic";
  }
  return "?";
}

std::string_view to_string(DirectionMode mode) {
  return mode == DirectionMode::best_of_both ? "best-of-both" : "random-direction";
}

OperatorKind parse_operator_kind(std::string_view text) {
  if (text == "lstep" || text == "l-step") return OperatorKind::l_step;
  if (text == "random") return OperatorKind::random;
  if (text == "random-wr") return OperatorKind::random_with_replacement;
  if (text == "harmonic") return OperatorKind::harmonic;
  throw ConfigError("unknown operator '" + std::string(text) + "'");
}

DirectionMode parse_direction_mode(std::string_view text) {
  if (text == "random-direction") return DirectionMode::random_direction;
  if (text == "best-of-both") return DirectionMode::best_of_both;
  throw ConfigError("unknown direction mode '" + std::string(text) + "'");
}

void OperatorSpec::validate() const {
  if (kind == OperatorKind::l_step && max_step < 1) throw ConfigError("ell must be at least 1");
}

OperatorState::OperatorState(const ParameterSpace& space) {
  proposed_.reserve(space.dimension_count());
  for (std::size_t i = 0; i < space.dimension_count(); ++i) {
    proposed_.emplace_back(static_cast<std::size_t>(space.range(i)) + 1, false);
  }
}

bool OperatorState::was_proposed(std::size_t dim, int value) const {
  return proposed_[dim][static_cast<std::size_t>(value)];
}

void OperatorState::mark(std::size_t dim, int value) {
  proposed_[dim][static_cast<std::size_t>(value)] = true;
}

std::size_t OperatorState::proposed_count(std::size_t dim) const {
  return static_cast<std::size_t>(std::count(proposed_[dim].begin(), proposed_[dim].end(), true));
}

void OperatorState::reset() {
  for (auto& dim : proposed_) std::fill(dim.begin(), dim.end(), false);
}

void OperatorState::reset_dimension(std::size_t dim) {
  std::fill(proposed_[dim].begin(), proposed_[dim].end(), false);
}

namespace {

std::size_t random_dimension(const ParameterSpace& space, Engine& rng) {
  return uniform_int<std::size_t>(rng, 0, space.dimension_count() - 1);
}

void require_inside(const ParameterSpace& space, const Configuration& c) {
  if (!space.contains(c)) throw ContractViolation("mutation of configuration outside space");
}

}  // namespace

Configuration mutate_l_step(const ParameterSpace& space, const Configuration& c, int max_step,
                            Engine& rng) {
  require_inside(space, c);
  if (max_step < 1) throw ConfigError("ell must be at least 1");
  for (;;) {
    const auto dim = random_dimension(space, rng);
    const int d = uniform_int(rng, 1, max_step);
    const int target = bernoulli(rng, 0.5) ? c[dim] + d : c[dim] - d;
    if (target < 1 || target > space.range(dim)) continue;
    Configuration out = c;
    out[dim] = target;
    return out;
  }
}

Configuration mutate_random(const ParameterSpace& space, const Configuration& c, OperatorState& state,
                            bool without_replacement, Engine& rng) {
  require_inside(space, c);
  const auto dim = random_dimension(space, rng);
  const int range = space.range(dim);
  Configuration out = c;
  if (!without_replacement) {
    int v = uniform_int(rng, 1, range - 1);
    if (v >= c[dim]) ++v;
    out[dim] = v;
    return out;
  }
  state.mark(dim, c[dim]);
  std::vector<int> eligible;
  eligible.reserve(static_cast<std::size_t>(range));
  for (int v = 1; v <= range; ++v) {
    if (!state.was_proposed(dim, v)) eligible.push_back(v);
  }
  if (eligible.empty()) throw NeighborhoodExhausted(dim);
  out[dim] = eligible[uniform_int<std::size_t>(rng, 0, eligible.size() - 1)];
  state.mark(dim, out[dim]);
  return out;
}

Configuration mutate_harmonic(const ParameterSpace& space,
                              std::span<const HarmonicDistribution> steps, const Configuration& c,
                              DirectionMode mode, MutationContext* context, Engine& rng) {
  require_inside(space, c);
  if (steps.size() != space.dimension_count()) {
    throw ContractViolation("mutate_harmonic: one step distribution per dimension required");
  }
  if (mode == DirectionMode::best_of_both && context == nullptr) {
    throw ContractViolation("mutate_harmonic: best-of-both needs a comparison context");
  }
  for (;;) {
    const auto dim = random_dimension(space, rng);
    const int d = steps[dim].sample(rng);
    const int up = c[dim] + d;
    const int down = c[dim] - d;
    const bool up_ok = up <= space.range(dim);
    const bool down_ok = down >= 1;
    if (!up_ok && !down_ok) continue;

    Configuration out = c;
    if (mode == DirectionMode::random_direction) {
      const bool go_up = bernoulli(rng, 0.5);
      if (go_up ? !up_ok : !down_ok) continue;
      out[dim] = go_up ? up : down;
      return out;
    }
    if (up_ok != down_ok) {
      out[dim] = up_ok ? up : down;
      return out;
    }
    // Both feasible: one counted comparison. The first argument wins ties,
    // so which side goes first is randomized.
    Configuration plus = c;
    plus[dim] = up;
    out[dim] = down;
    context->observe(plus);
    context->observe(out);
    if (bernoulli(rng, 0.5)) {
      return context->prefers_second(plus, out) ? out : plus;
    }
    return context->prefers_second(out, plus) ? plus : out;
  }
}

Configuration random_neighbor(const ParameterSpace& space, const Configuration& c, Engine& rng) {
  require_inside(space, c);
  const auto total = space.total_range() - static_cast<std::int64_t>(space.dimension_count());
  auto pick = uniform_int<std::int64_t>(rng, 0, total - 1);
  Configuration out = c;
  for (std::size_t dim = 0; dim < space.dimension_count(); ++dim) {
    const std::int64_t others = space.range(dim) - 1;
    if (pick < others) {
      int v = static_cast<int>(pick) + 1;
      if (v >= c[dim]) ++v;
      out[dim] = v;
      return out;
    }
    pick -= others;
  }
  throw ContractViolation("random_neighbor: unreachable");
}

Mutator::Mutator(const ParameterSpace& space, OperatorSpec spec)
    : space_(&space), spec_(spec), state_(space) {
  spec_.validate();
  harmonic_.reserve(space.dimension_count());
  for (std::size_t i = 0; i < space.dimension_count(); ++i) harmonic_.emplace_back(space.range(i));
}

Configuration Mutator::mutate(const Configuration& c, MutationContext& context, Engine& rng) {
  switch (spec_.kind) {
    case OperatorKind::l_step:
      return mutate_l_step(*space_, c, spec_.max_step, rng);
    case OperatorKind::random_with_replacement:
      return mutate_random(*space_, c, state_, false, rng);
    case OperatorKind::random:
      for (;;) {
        try {
          return mutate_random(*space_, c, state_, true, rng);
        } catch (const NeighborhoodExhausted& e) {
          state_.reset_dimension(e.dimension());
          state_.mark(e.dimension(), c[e.dimension()]);
        }
      }
    case OperatorKind::harmonic:
      return mutate_harmonic(*space_, harmonic_, c, spec_.direction, &context, rng);
  }
  throw ContractViolation("unknown operator");
}

}  // namespace ptune
