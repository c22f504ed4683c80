#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ptune/evaluation.hpp"
#include "ptune/rng.hpp"
#include "ptune/space.hpp"

namespace ptune {

class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t n, bool value = false) : bits_(n, value ? 1 : 0) {}
  /// "10110" -> bits 1,0,1,1,0. Throws ContractViolation on other characters.
  static BitString from_string(std::string_view text);

  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }
  void flip(std::size_t i) { bits_[i] ^= 1; }
  std::span<const std::uint8_t> bits() const { return bits_; }
  std::string to_string() const;

 private:
  std::vector<std::uint8_t> bits_;
};

enum class Benchmark { onemax, leadingones, ridge };
enum class InitRule { uniform, ridge_start };  // ridge_start is 0^n

std::string_view to_string(Benchmark b);
Benchmark parse_benchmark(std::string_view text);
std::string_view to_string(InitRule r);
InitRule parse_init_rule(std::string_view text);

int eval_onemax(const BitString& x);
int eval_leadingones(const BitString& x);
/// n + i on the ridge points 1^i 0^(n-i); n - |x|_1 elsewhere.
int eval_ridge(const BitString& x);
int evaluate(Benchmark b, const BitString& x);

struct TargetRunResult {
  double final_fitness = 0.0;
  int iterations_used = 0;
};

/// Receives the parent fitness after initialization and after every iteration.
using FitnessObserver = std::function<void(int iteration, int parent_fitness, const BitString& parent)>;

/// Elitist (1+1) EA with standard bit mutation at rate chi/n; the offspring
/// replaces the parent iff its fitness is at least as good.
/// Throws ConfigError unless 0 < chi < n.
TargetRunResult run_one_plus_one_ea(Benchmark fn, int n, double chi, int cutoff, InitRule init,
                                    Engine& rng, const FitnessObserver& observer = {});

/// Elitist RLS_k: each offspring flips exactly k distinct positions.
/// Throws ConfigError unless 1 <= k <= n.
TargetRunResult run_rls_k(Benchmark fn, int n, int k, int cutoff, Engine& rng,
                          InitRule init = InitRule::uniform, const FitnessObserver& observer = {});

/// Arithmetic mean of final fitness. Throws ContractViolation if empty.
double performance_metric(std::span<const TargetRunResult> results);

/// (1+1) EA whose mutation-rate numerator chi is the decoded value of the
/// single configuration dimension.
class OnePlusOneEaTarget final : public TargetAlgorithm {
 public:
  OnePlusOneEaTarget(ParameterSpace space, Benchmark fn, int n, InitRule init);
  std::string id() const override;
  double run(const Configuration& c, std::size_t instance, int cutoff,
             std::uint64_t seed) const override;

 private:
  ParameterSpace space_;
  Benchmark fn_;
  int n_;
  InitRule init_;
};

/// RLS_k whose k is the decoded value of the single configuration dimension.
class RlsKTarget final : public TargetAlgorithm {
 public:
  RlsKTarget(ParameterSpace space, Benchmark fn, int n);
  std::string id() const override;
  double run(const Configuration& c, std::size_t instance, int cutoff,
             std::uint64_t seed) const override;

 private:
  ParameterSpace space_;
  Benchmark fn_;
  int n_;
};

}  // namespace ptune
