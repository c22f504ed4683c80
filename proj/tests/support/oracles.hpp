#pragma once

// Independent reference computations used as test oracles. None of these
// call into the library code they are checked against.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

enum class Move { l_step, harmonic_random_direction, random_with_replacement };

/// Expected calls to better() before ParamRLS first generates position
/// `target` on an exact 1-D landscape, from a uniform start. Solved as an
/// absorbing Markov chain over incumbent positions.
double rls_expected_calls(const std::vector<double>& quality, int target, Move move, int ell = 1,
                          bool accept_ties = true);

/// Quadratic brute force of (alpha, beta)-approximate unimodality with alpha
/// given in hundredths. Returns the smallest violating (x, y) or nothing.
std::optional<std::pair<int, int>> unimodal_violation(const std::vector<double>& quality, int alpha_hundredths,
                                                      int beta);

int naive_onemax(const std::string& bits);
int naive_leadingones(const std::string& bits);
int naive_ridge(const std::string& bits);

/// Two-tailed Mann-Whitney p by enumerating every assignment of the pooled
/// sample to the first group.
double exact_mann_whitney_p(const std::vector<double>& xs, const std::vector<double>& ys);

/// Upper-tail p-value of Pearson's chi-square statistic.
double chi_square_p(const std::vector<long long>& observed, const std::vector<double>& expected_probability);

}  // namespace oracle
