#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "ptune/space.hpp"

namespace ptune {

/// A configurable algorithm together with the instance set it is run on.
class TargetAlgorithm {
 public:
  virtual ~TargetAlgorithm() = default;

  virtual std::string id() const = 0;
  virtual std::size_t instance_count() const { return 1; }

  /// Performance of one run of `c` on `instance` lasting `cutoff`
  /// iterations; higher is better. Must be a pure function of its
  /// arguments. Throws EvaluationError on failure.
  virtual double run(const Configuration& c, std::size_t instance, int cutoff,
                     std::uint64_t seed) const = 0;

  /// Exact and cached landscapes know the quality of every configuration;
  /// better() then compares these values directly.
  virtual std::optional<double> exact_quality(const Configuration&) const { return std::nullopt; }
};

/// Arguments of better(): the target, cutoff kappa and runs r.
struct EvalProtocol {
  std::shared_ptr<const TargetAlgorithm> target;
  int cutoff = 1;
  int runs = 1;

  void validate() const;
};

enum class Winner { first, second };

/// Runs each configuration `runs` times (run j on instance j mod |instances|)
/// and returns `second` iff its mean performance strictly exceeds the mean
/// of `first`. Seeds derive from `call_seed`. This primitive does not count
/// itself; RunContext::prefers_second does.
Winner better(const EvalProtocol& eval, const Configuration& first, const Configuration& second,
              std::uint64_t call_seed);

/// Mean performance of `c` over the runs better() would perform for one side.
double mean_performance(const EvalProtocol& eval, const Configuration& c, std::uint64_t side_seed);

}  // namespace ptune
