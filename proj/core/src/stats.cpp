#include "ptune/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ptune/errors.hpp"

namespace ptune {

namespace {

struct Ranked {
  std::vector<long long> doubled_ranks;  // 2 * midrank, so always integral
  double tie_term = 0.0;                 // sum of t^3 - t over tie groups
};

Ranked doubled_midranks(std::span<const double> pooled) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
  Ranked r;
  r.doubled_ranks.assign(n, 0);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    // Positions i..j (0-based) share the midrank ((i+1) + (j+1)) / 2.
    const long long doubled = static_cast<long long>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) r.doubled_ranks[order[k]] = doubled;
    const double t = static_cast<double>(j - i + 1);
    r.tie_term += t * t * t - t;
    i = j + 1;
  }
  return r;
}

// Two-tailed exact p-value: the share of all size-k subsets of the pooled
// doubled ranks whose sum deviates from its mean at least as much as the
// observed one.
double exact_p(const std::vector<long long>& ranks, std::size_t k, long long observed) {
  long long total = 0;
  for (long long r : ranks) total += r;
  std::vector<long long> sorted = ranks;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  long long max_sum = 0;
  for (std::size_t i = 0; i < k; ++i) max_sum += sorted[i];

  // ways[c][s]: number of c-subsets with doubled-rank sum s.
  std::vector<std::vector<long double>> ways(k + 1, std::vector<long double>(static_cast<std::size_t>(max_sum) + 1, 0.0L));
  ways[0][0] = 1.0L;
  for (long long r : ranks) {
    for (std::size_t c = k; c >= 1; --c) {
      auto& dst = ways[c];
      const auto& src = ways[c - 1];
      for (long long s = max_sum; s >= r; --s) dst[static_cast<std::size_t>(s)] += src[static_cast<std::size_t>(s - r)];
    }
  }
  const std::size_t n = ranks.size();
  // Mean of a k-subset sum is k * total / n; compare n * sum to k * total to
  // stay in integers.
  const long long center = static_cast<long long>(k) * total;
  const long long obs_dev = std::llabs(static_cast<long long>(n) * observed - center);
  long double hit = 0.0L, all = 0.0L;
  for (long long s = 0; s <= max_sum; ++s) {
    const long double w = ways[k][static_cast<std::size_t>(s)];
    if (w == 0.0L) continue;
    all += w;
    if (std::llabs(static_cast<long long>(n) * s - center) >= obs_dev) hit += w;
  }
  return std::min(1.0, static_cast<double>(hit / all));
}

}  // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> xs, std::span<const double> ys) {
  if (xs.empty() || ys.empty()) throw ContractViolation("Mann-Whitney U needs two non-empty samples");
  const std::size_t n1 = xs.size(), n2 = ys.size(), n = n1 + n2;
  std::vector<double> pooled(xs.begin(), xs.end());
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  const Ranked ranked = doubled_midranks(pooled);

  long long r1_doubled = 0;
  for (std::size_t i = 0; i < n1; ++i) r1_doubled += ranked.doubled_ranks[i];

  MannWhitneyResult out;
  out.u = static_cast<double>(r1_doubled) / 2.0 - static_cast<double>(n1) * (n1 + 1) / 2.0;
  const double nd = static_cast<double>(n);
  if (ranked.tie_term == nd * nd * nd - nd) {
    out.degenerate = true;
    out.p_value = 1.0;
    out.exact = std::min(n1, n2) < 8;
    return out;
  }

  if (std::min(n1, n2) < 8) {
    out.exact = true;
    if (n1 <= n2) {
      out.p_value = exact_p(ranked.doubled_ranks, n1, r1_doubled);
    } else {
      long long r2_doubled = 0;
      for (std::size_t i = n1; i < n; ++i) r2_doubled += ranked.doubled_ranks[i];
      out.p_value = exact_p(ranked.doubled_ranks, n2, r2_doubled);
    }
    return out;
  }

  const double mu = static_cast<double>(n1) * n2 / 2.0;
  const double var = static_cast<double>(n1) * n2 / 12.0 * ((nd + 1.0) - ranked.tie_term / (nd * (nd - 1.0)));
  const double z = std::max(0.0, std::abs(out.u - mu) - 0.5) / std::sqrt(var);
  out.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return out;
}

double cliffs_delta(std::span<const double> xs, std::span<const double> ys) {
  if (xs.empty() || ys.empty()) throw ContractViolation("Cliff's delta needs two non-empty samples");
  std::vector<double> sorted(ys.begin(), ys.end());
  std::sort(sorted.begin(), sorted.end());
  long double dominance = 0.0L;
  for (double x : xs) {
    const auto less = std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    const auto greater = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x);
    dominance += static_cast<long double>(less - greater);
  }
  return static_cast<double>(dominance / (static_cast<long double>(xs.size()) * ys.size()));
}

ComparisonReport compare_samples(std::span<const double> xs, std::span<const double> ys) {
  const auto mw = mann_whitney_u(xs, ys);
  ComparisonReport r;
  r.u_statistic = mw.u;
  r.p_value = mw.p_value;
  r.cliffs_delta = cliffs_delta(xs, ys);
  r.n1 = xs.size();
  r.n2 = ys.size();
  r.degenerate = mw.degenerate;
  return r;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw ContractViolation("mean of an empty sample");
  long double s = 0.0L;
  for (double x : xs) s += x;
  return static_cast<double>(s / xs.size());
}

double standard_error(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  long double ss = 0.0L;
  for (double x : xs) ss += (x - m) * (x - m);
  const double sd = std::sqrt(static_cast<double>(ss / (xs.size() - 1)));
  return sd / std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace ptune
