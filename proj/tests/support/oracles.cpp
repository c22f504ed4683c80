#include "oracles.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace oracle {

namespace {

// Dense Gaussian elimination with partial pivoting; solves A x = b.
std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    if (std::abs(a[col][col]) < 1e-300) throw std::runtime_error("singular system");
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

// Proposal law of one mutation from position x (1-based) on a line of m.
std::vector<double> proposal(int m, int x, Move move, int ell) {
  std::vector<double> p(static_cast<std::size_t>(m) + 1, 0.0);
  double harmonic = 0.0;
  for (int d = 1; d < m; ++d) harmonic += 1.0 / d;
  for (int y = 1; y <= m; ++y) {
    if (y == x) continue;
    const int d = std::abs(y - x);
    switch (move) {
      case Move::l_step: p[static_cast<std::size_t>(y)] = d <= ell ? 0.5 / ell : 0.0; break;
      case Move::harmonic_random_direction: p[static_cast<std::size_t>(y)] = 0.5 / (d * harmonic); break;
      case Move::random_with_replacement: p[static_cast<std::size_t>(y)] = 1.0; break;
    }
  }
  double total = 0.0;
  for (double v : p) total += v;
  for (double& v : p) v /= total;
  return p;
}

}  // namespace

double rls_expected_calls(const std::vector<double>& quality, int target, Move move, int ell, bool accept_ties) {
  const int m = static_cast<int>(quality.size());
  // Unknowns E[x] for every non-target x; E[target] = 0.
  std::vector<int> index(static_cast<std::size_t>(m) + 1, -1);
  int k = 0;
  for (int x = 1; x <= m; ++x) {
    if (x != target) index[static_cast<std::size_t>(x)] = k++;
  }
  std::vector<std::vector<double>> a(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k), 0.0));
  std::vector<double> b(static_cast<std::size_t>(k), 0.0);
  for (int x = 1; x <= m; ++x) {
    if (x == target) continue;
    const auto row = static_cast<std::size_t>(index[static_cast<std::size_t>(x)]);
    a[row][row] += 1.0;
    const auto p = proposal(m, x, move, ell);
    const double qx = quality[static_cast<std::size_t>(x - 1)];
    for (int y = 1; y <= m; ++y) {
      const double py = p[static_cast<std::size_t>(y)];
      if (py == 0.0 || y == target) continue;  // generating the target costs nothing more
      b[row] += py;                            // one comparison
      const double qy = quality[static_cast<std::size_t>(y - 1)];
      const bool moves = accept_ties ? qy >= qx : qy > qx;
      const int next = moves ? y : x;
      a[row][static_cast<std::size_t>(index[static_cast<std::size_t>(next)])] -= py;
    }
  }
  const auto e = solve(a, b);
  double sum = 0.0;
  for (double v : e) sum += v;
  return sum / m;
}

std::optional<std::pair<int, int>> unimodal_violation(const std::vector<double>& quality, int alpha_hundredths,
                                                      int beta) {
  const int m = static_cast<int>(quality.size());
  int opt = 1;
  for (int x = 2; x <= m; ++x) {
    if (quality[static_cast<std::size_t>(x - 1)] > quality[static_cast<std::size_t>(opt - 1)]) opt = x;
  }
  std::vector<std::pair<int, int>> bad;
  for (int x = 1; x <= m; ++x) {
    for (int y = 1; y <= m; ++y) {
      const long long i = std::abs(x - opt);
      const long long j = std::abs(y - opt);
      if (i < beta) continue;
      if (100 * j <= alpha_hundredths * i) continue;
      // Minimization form: need f(x) < f(y) with f = -quality.
      if (!(-quality[static_cast<std::size_t>(x - 1)] < -quality[static_cast<std::size_t>(y - 1)])) bad.emplace_back(x, y);
    }
  }
  if (bad.empty()) return std::nullopt;
  return *std::min_element(bad.begin(), bad.end());
}

int naive_onemax(const std::string& bits) {
  int n = 0;
  for (char c : bits) n += c == '1';
  return n;
}

int naive_leadingones(const std::string& bits) {
  int n = 0;
  while (n < static_cast<int>(bits.size()) && bits[static_cast<std::size_t>(n)] == '1') ++n;
  return n;
}

int naive_ridge(const std::string& bits) {
  const int n = static_cast<int>(bits.size());
  for (int i = 0; i <= n; ++i) {
    if (bits == std::string(static_cast<std::size_t>(i), '1') + std::string(static_cast<std::size_t>(n - i), '0')) {
      return n + i;
    }
  }
  return n - naive_onemax(bits);
}

double exact_mann_whitney_p(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> pooled = xs;
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  const int n = static_cast<int>(pooled.size());
  const int n1 = static_cast<int>(xs.size());
  std::vector<double> rank(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    int below = 0, equal = 0;
    for (int b = 0; b < n; ++b) {
      below += pooled[static_cast<std::size_t>(b)] < pooled[static_cast<std::size_t>(a)];
      equal += pooled[static_cast<std::size_t>(b)] == pooled[static_cast<std::size_t>(a)];
    }
    rank[static_cast<std::size_t>(a)] = below + (equal + 1) / 2.0;
  }
  auto u_of = [&](unsigned mask) {
    double r = 0.0;
    for (int a = 0; a < n; ++a) {
      if (mask >> a & 1u) r += rank[static_cast<std::size_t>(a)];
    }
    return r - n1 * (n1 + 1) / 2.0;
  };
  const double center = n1 * (n - n1) / 2.0;
  const double observed = std::abs(u_of((1u << n1) - 1u) - center);
  long long hit = 0, all = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != n1) continue;
    ++all;
    if (std::abs(u_of(mask) - center) >= observed - 1e-9) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(all);
}

double chi_square_p(const std::vector<long long>& observed, const std::vector<double>& expected_probability) {
  long long total = 0;
  for (auto o : observed) total += o;
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected_probability[i] * static_cast<double>(total);
    stat += (static_cast<double>(observed[i]) - e) * (static_cast<double>(observed[i]) - e) / e;
  }
  boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace oracle
