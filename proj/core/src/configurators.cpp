#include "ptune/configurators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "ptune/errors.hpp"

namespace ptune {

StopRule StopRule::first_target_sampled(std::vector<Configuration> targets) {
  if (targets.empty()) throw ConfigError("first-optimum-sampled stop rule needs a target set");
  StopRule rule;
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  rule.targets_ = std::move(targets);
  return rule;
}

StopRule StopRule::call_budget(std::uint64_t max_calls) {
  StopRule rule;
  return rule.with_budget(max_calls);
}

StopRule& StopRule::with_budget(std::uint64_t max_calls) {
  if (max_calls < 1) throw ConfigError("call budget must be at least 1");
  max_calls_ = max_calls;
  return *this;
}

bool StopRule::is_target(const Configuration& c) const {
  return std::binary_search(targets_.begin(), targets_.end(), c);
}

RunContext::RunContext(const ParameterSpace& space, const EvalProtocol& eval, const StopRule& stop,
                       std::uint64_t seed, bool record_history)
    : space_(&space),
      eval_(&eval),
      stop_(&stop),
      call_seed_root_(derive_seed(seed, hash_tag("better"))),
      rng_(make_engine(derive_seed(seed, hash_tag("configurator")))),
      record_history_(record_history) {
  eval.validate();
  for (const auto& t : stop.targets()) {
    if (!space.contains(t)) throw ConfigError("target " + t.to_string() + " outside the space");
  }
}

bool RunContext::prefers_second(const Configuration& first, const Configuration& second) {
  if (stop_->max_calls() && trace_.better_calls >= *stop_->max_calls()) throw RunStopped{};
  const auto call_seed = derive_seed(call_seed_root_, trace_.better_calls);
  ++trace_.better_calls;
  return better(*eval_, first, second, call_seed) == Winner::second;
}

void RunContext::observe(const Configuration& c) {
  if (stop_->has_targets() && stop_->is_target(c)) {
    if (!trace_.first_sampled_optimum_at) trace_.first_sampled_optimum_at = trace_.better_calls;
    throw RunStopped{};
  }
}

void RunContext::record_incumbent(const Configuration& c) {
  trace_.final_incumbent = c;
  if (record_history_) trace_.incumbent_history.emplace_back(trace_.better_calls, c);
}

RunTrace run_param_rls(const ParameterSpace& space, const OperatorSpec& op, const EvalProtocol& eval,
                       const StopRule& stop, std::uint64_t seed, const RlsOptions& options) {
  RunContext ctx(space, eval, stop, seed, options.record_history);
  Mutator mutator(space, op);
  Configuration incumbent = sample_uniform(space, ctx.rng());
  try {
    ctx.record_incumbent(incumbent);
    ctx.observe(incumbent);
    for (;;) {
      Configuration candidate = mutator.mutate(incumbent, ctx, ctx.rng());
      ctx.observe(candidate);
      const bool replace = options.accept_ties ? !ctx.improves(incumbent, candidate)
                                               : ctx.improves(candidate, incumbent);
      if (replace) {
        incumbent = std::move(candidate);
        ctx.record_incumbent(incumbent);
      }
    }
  } catch (const RunStopped&) {
  }
  return std::move(ctx.trace());
}

void ParamIlsSettings::validate() const {
  if (initial_samples < 0) throw ConfigError("ParamILS R must be non-negative");
  if (perturbation_strength < 1) throw ConfigError("ParamILS s must be at least 1");
  if (!(restart_probability >= 0.0 && restart_probability <= 1.0)) {
    throw ConfigError("ParamILS p_restart must lie in [0, 1]");
  }
}

std::vector<Configuration> scan_order(const Mutator& mutator, const Configuration& c,
                                      const DiscoveredSet& discovered, Engine& rng) {
  const auto& space = mutator.space();
  const auto& spec = mutator.spec();
  std::vector<Configuration> order;
  std::vector<double> keys;
  for (std::size_t dim = 0; dim < space.dimension_count(); ++dim) {
    for (int v = 1; v <= space.range(dim); ++v) {
      const int d = std::abs(v - c[dim]);
      if (d == 0) continue;
      if (spec.kind == OperatorKind::l_step && d > spec.max_step) continue;
      Configuration n = c;
      n[dim] = v;
      if (discovered.contains(n)) continue;
      order.push_back(std::move(n));
      if (spec.kind == OperatorKind::harmonic) {
        // Exponential race: sorting Exp(1)/w ascending draws a permutation
        // by successive weighted sampling without replacement.
        const double w = mutator.harmonic()[dim].probability(d) /
                         static_cast<double>(space.dimension_count());
        keys.push_back(-std::log1p(-uniform01(rng)) / w);
      }
    }
  }
  if (spec.kind == OperatorKind::harmonic) {
    std::vector<std::size_t> idx(order.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return keys[a] < keys[b] || (keys[a] == keys[b] && a < b);
    });
    std::vector<Configuration> sorted;
    sorted.reserve(order.size());
    for (auto i : idx) sorted.push_back(std::move(order[i]));
    return sorted;
  }
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

Configuration iterative_first_improvement(const Configuration& start, const Mutator& mutator,
                                          DiscoveredSet& discovered, RunContext& context) {
  Configuration current = start;
  discovered.insert(current);
  for (;;) {
    const Configuration anchor = current;
    for (const auto& neighbor : scan_order(mutator, anchor, discovered, context.rng())) {
      context.observe(neighbor);
      discovered.insert(neighbor);
      if (context.improves(neighbor, anchor)) {
        current = neighbor;
        break;
      }
    }
    if (current == anchor) return current;
  }
}

namespace {

Configuration perturb(const Mutator& mutator, const Configuration& c, RunContext& context) {
  const auto& spec = mutator.spec();
  switch (spec.kind) {
    case OperatorKind::l_step:
      return mutate_l_step(mutator.space(), c, spec.max_step, context.rng());
    case OperatorKind::harmonic:
      return mutate_harmonic(mutator.space(), mutator.harmonic(), c, spec.direction, &context,
                             context.rng());
    case OperatorKind::random:
    case OperatorKind::random_with_replacement:
      return random_neighbor(mutator.space(), c, context.rng());
  }
  throw ContractViolation("unknown operator");
}

}  // namespace

RunTrace run_param_ils(const ParameterSpace& space, const ParamIlsSettings& settings,
                       const OperatorSpec& op, const EvalProtocol& eval, const StopRule& stop,
                       std::uint64_t seed, bool record_history) {
  settings.validate();
  if (op.kind == OperatorKind::random_with_replacement) {
    throw ConfigError("ParamILS scans neighborhoods without replacement; use 'random'");
  }
  RunContext ctx(space, eval, stop, seed, record_history);
  const Mutator mutator(space, op);
  DiscoveredSet discovered(space);
  try {
    Configuration start = sample_uniform(space, ctx.rng());
    ctx.observe(start);
    discovered.insert(start);
    for (int i = 0; i < settings.initial_samples; ++i) {
      Configuration sample = sample_uniform(space, ctx.rng());
      ctx.observe(sample);
      discovered.insert(sample);
      if (ctx.improves(sample, start)) start = std::move(sample);
    }

    Configuration ils = iterative_first_improvement(start, mutator, discovered, ctx);
    Configuration incumbent = ils;
    ctx.record_incumbent(incumbent);
    for (;;) {
      Configuration probe = ils;
      for (int i = 0; i < settings.perturbation_strength; ++i) {
        probe = perturb(mutator, probe, ctx);
        ctx.observe(probe);
      }
      probe = iterative_first_improvement(probe, mutator, discovered, ctx);
      if (ctx.improves(probe, ils)) ils = probe;
      if (ctx.improves(ils, incumbent)) {
        incumbent = ils;
        ctx.record_incumbent(incumbent);
      }
      if (bernoulli(ctx.rng(), settings.restart_probability)) {
        ils = sample_uniform(space, ctx.rng());
        ctx.observe(ils);
        discovered.clear();
        discovered.insert(ils);
      }
    }
  } catch (const RunStopped&) {
  }
  return std::move(ctx.trace());
}

}  // namespace ptune
