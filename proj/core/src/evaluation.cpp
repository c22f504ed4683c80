#include "ptune/evaluation.hpp"

#include "ptune/errors.hpp"
#include "ptune/rng.hpp"

namespace ptune {

void EvalProtocol::validate() const {
  if (!target) throw ConfigError("evaluation protocol has no target algorithm");
  if (cutoff < 1) throw ConfigError("cutoff kappa must be at least 1");
  if (runs < 1) throw ConfigError("runs per comparison r must be at least 1");
  if (target->instance_count() < 1) throw ConfigError("target has no instances");
}

double mean_performance(const EvalProtocol& eval, const Configuration& c, std::uint64_t side_seed) {
  const auto instances = eval.target->instance_count();
  double sum = 0.0;
  for (int j = 0; j < eval.runs; ++j) {
    const auto instance = static_cast<std::size_t>(j) % instances;
    sum += eval.target->run(c, instance, eval.cutoff, derive_seed(side_seed, static_cast<std::uint64_t>(j)));
  }
  return sum / eval.runs;
}

Winner better(const EvalProtocol& eval, const Configuration& first, const Configuration& second,
              std::uint64_t call_seed) {
  if (const auto qa = eval.target->exact_quality(first)) {
    const auto qb = eval.target->exact_quality(second);
    return (qb && *qb > *qa) ? Winner::second : Winner::first;
  }
  const double a = mean_performance(eval, first, derive_seed(call_seed, 0));
  const double b = mean_performance(eval, second, derive_seed(call_seed, 1));
  return b > a ? Winner::second : Winner::first;
}

}  // namespace ptune
