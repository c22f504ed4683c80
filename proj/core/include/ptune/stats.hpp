#pragma once

#include <cstddef>
#include <span>

namespace ptune {

struct MannWhitneyResult {
  double u = 0.0;        // U of the first sample (midranks)
  double p_value = 1.0;  // two-tailed
  bool exact = false;
  bool degenerate = false;  // every value identical
};

/// Two-tailed Mann-Whitney U test. Exact permutation distribution (ties
/// included) when min(n1, n2) < 8, otherwise the normal approximation with
/// tie-corrected variance and continuity correction.
/// Throws ContractViolation if either sample is empty.
MannWhitneyResult mann_whitney_u(std::span<const double> xs, std::span<const double> ys);

/// (#{x > y} - #{x < y}) / (n1 * n2).
double cliffs_delta(std::span<const double> xs, std::span<const double> ys);

struct ComparisonReport {
  double u_statistic = 0.0;
  double p_value = 1.0;
  double cliffs_delta = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  bool degenerate = false;
};

ComparisonReport compare_samples(std::span<const double> xs, std::span<const double> ys);

double mean(std::span<const double> xs);
/// Sample standard deviation over sqrt(n); zero for n < 2.
double standard_error(std::span<const double> xs);

}  // namespace ptune
