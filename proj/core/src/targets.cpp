#include "ptune/targets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ptune/errors.hpp"

namespace ptune {

BitString BitString::from_string(std::string_view text) {
  BitString x(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') throw ContractViolation("bit string must contain only 0 and 1");
    x.set(i, text[i] == '1');
  }
  return x;
}

std::string BitString::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) s[i] = '1';
  }
  return s;
}

std::string_view to_string(Benchmark b) {
  switch (b) {
    case Benchmark::onemax: return "onemax";
    case Benchmark::leadingones: return "leadingones";
    case Benchmark::ridge: return "ridge";
  }
  return "?";
}

Benchmark parse_benchmark(std::string_view text) {
  if (text == "onemax") return Benchmark::onemax;
  if (text == "leadingones") return Benchmark::leadingones;
  if (text == "ridge") return Benchmark::ridge;
  throw ConfigError("unknown benchmark '" + std::string(text) + "'");
}

std::string_view to_string(InitRule r) { return r == InitRule::uniform ? "uniform" : "ridge-start"; }

InitRule parse_init_rule(std::string_view text) {
  if (text == "uniform") return InitRule::uniform;
  if (text == "ridge-start") return InitRule::ridge_start;
  throw ConfigError("unknown init rule '" + std::string(text) + "'");
}

int eval_onemax(const BitString& x) {
  const auto b = x.bits();
  return static_cast<int>(std::count(b.begin(), b.end(), std::uint8_t{1}));
}

int eval_leadingones(const BitString& x) {
  const auto b = x.bits();
  return static_cast<int>(std::find(b.begin(), b.end(), std::uint8_t{0}) - b.begin());
}

int eval_ridge(const BitString& x) {
  const auto b = x.bits();
  const int n = static_cast<int>(b.size());
  const auto prefix = std::find(b.begin(), b.end(), std::uint8_t{0});
  const bool on_ridge = std::find(prefix, b.end(), std::uint8_t{1}) == b.end();
  if (on_ridge) return n + static_cast<int>(prefix - b.begin());
  return n - eval_onemax(x);
}

int evaluate(Benchmark fn, const BitString& x) {
  switch (fn) {
    case Benchmark::onemax: return eval_onemax(x);
    case Benchmark::leadingones: return eval_leadingones(x);
    case Benchmark::ridge: return eval_ridge(x);
  }
  return 0;
}

namespace {

BitString initial_individual(int n, InitRule init, Engine& rng) {
  BitString x(static_cast<std::size_t>(n));
  if (init == InitRule::uniform) {
    for (int i = 0; i < n; ++i) x.set(static_cast<std::size_t>(i), bernoulli(rng, 0.5));
  }
  return x;
}

// Elitist acceptance of the offspring obtained by flipping `flips` (sorted
// ascending) in `x`. Updates x and fitness in place and reports whether the
// offspring replaced the parent. The LeadingOnes and on-ridge cases decide
// from the flipped positions alone; they agree with full evaluation.
class Acceptor {
 public:
  Acceptor(Benchmark fn, BitString& x, int& fitness)
      : fn_(fn), x_(x), fitness_(fitness), n_(static_cast<int>(x.size())) {}

  // True if an offspring whose flip number `index` (0-based, ascending) is
  // at `pos` cannot be accepted, whatever the remaining flips are. Lets the
  // sampler stop drawing early.
  bool rejects(std::size_t index, int pos) const {
    if (fn_ == Benchmark::leadingones) return index == 0 && pos < fitness_;
    if (fn_ == Benchmark::ridge && fitness_ >= n_) return pos != fitness_ - n_ + static_cast<int>(index);
    return false;
  }

  bool offer(std::span<const int> flips) {
    if (flips.empty()) return true;
    switch (fn_) {
      case Benchmark::onemax: {
        int delta = 0;
        for (int p : flips) delta += x_[static_cast<std::size_t>(p)] ? -1 : 1;
        if (delta < 0) return false;
        apply(flips);
        fitness_ += delta;
        return true;
      }
      case Benchmark::leadingones: {
        if (flips.front() < fitness_) return false;
        apply(flips);
        if (flips.front() == fitness_) fitness_ = eval_leadingones(x_);
        return true;
      }
      case Benchmark::ridge: {
        if (fitness_ >= n_) {
          // Parent 1^i 0^(n-i): only flipping exactly positions i..i'-1 yields
          // a ridge point that is at least as good; anything else scores < n.
          const int i = fitness_ - n_;
          for (std::size_t t = 0; t < flips.size(); ++t) {
            if (flips[t] != i + static_cast<int>(t)) return false;
          }
          apply(flips);
          fitness_ += static_cast<int>(flips.size());
          return true;
        }
        apply(flips);
        const int f = eval_ridge(x_);
        if (f < fitness_) {
          apply(flips);
          return false;
        }
        fitness_ = f;
        return true;
      }
    }
    return false;
  }

 private:
  void apply(std::span<const int> flips) {
    for (int p : flips) x_.flip(static_cast<std::size_t>(p));
  }

  Benchmark fn_;
  BitString& x_;
  int& fitness_;
  int n_;
};

}  // namespace

TargetRunResult run_one_plus_one_ea(Benchmark fn, int n, double chi, int cutoff, InitRule init,
                                    Engine& rng, const FitnessObserver& observer) {
  if (n < 1) throw ConfigError("bit-string length must be at least 1");
  if (!(chi > 0.0 && chi < n)) throw ConfigError("mutation rate numerator chi must satisfy 0 < chi < n");
  if (cutoff < 0) throw ConfigError("cutoff must be non-negative");

  BitString x = initial_individual(n, init, rng);
  int fitness = evaluate(fn, x);
  if (observer) observer(0, fitness, x);

  Acceptor acceptor(fn, x, fitness);
  std::geometric_distribution<int> gap(chi / n);
  std::vector<int> flips;
  flips.reserve(static_cast<std::size_t>(n));
  for (int t = 1; t <= cutoff; ++t) {
    flips.clear();
    bool rejected = false;
    // Standard bit mutation by geometric gaps between flipped positions.
    for (int pos = gap(rng); pos < n; pos += 1 + gap(rng)) {
      if (acceptor.rejects(flips.size(), pos)) {
        rejected = true;
        break;
      }
      flips.push_back(pos);
    }
    if (!rejected) acceptor.offer(flips);
    if (observer) observer(t, fitness, x);
  }
  return {static_cast<double>(fitness), cutoff};
}

TargetRunResult run_rls_k(Benchmark fn, int n, int k, int cutoff, Engine& rng, InitRule init,
                          const FitnessObserver& observer) {
  if (n < 1) throw ConfigError("bit-string length must be at least 1");
  if (k < 1 || k > n) throw ConfigError("RLS_k needs 1 <= k <= n");
  if (cutoff < 0) throw ConfigError("cutoff must be non-negative");

  BitString x = initial_individual(n, init, rng);
  int fitness = evaluate(fn, x);
  if (observer) observer(0, fitness, x);

  Acceptor acceptor(fn, x, fitness);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> flips(static_cast<std::size_t>(k));
  for (int t = 1; t <= cutoff; ++t) {
    // Partial Fisher-Yates: the first k entries become a uniform k-subset.
    for (int s = 0; s < k; ++s) {
      const int j = uniform_int(rng, s, n - 1);
      std::swap(perm[static_cast<std::size_t>(s)], perm[static_cast<std::size_t>(j)]);
    }
    std::copy_n(perm.begin(), k, flips.begin());
    std::sort(flips.begin(), flips.end());
    acceptor.offer(flips);
    if (observer) observer(t, fitness, x);
  }
  return {static_cast<double>(fitness), cutoff};
}

double performance_metric(std::span<const TargetRunResult> results) {
  if (results.empty()) throw ContractViolation("performance_metric of an empty result list");
  double sum = 0.0;
  for (const auto& r : results) sum += r.final_fitness;
  return sum / static_cast<double>(results.size());
}

namespace {

void require_line(const ParameterSpace& space) {
  if (space.dimension_count() != 1) throw ConfigError("benchmark targets tune exactly one parameter");
}

}  // namespace

OnePlusOneEaTarget::OnePlusOneEaTarget(ParameterSpace space, Benchmark fn, int n, InitRule init)
    : space_(std::move(space)), fn_(fn), n_(n), init_(init) {
  require_line(space_);
  for (int i = 1; i <= space_.range(0); ++i) {
    const double chi = space_.dim(0).decode(i);
    if (!(chi > 0.0 && chi < n_)) throw ConfigError("chi grid leaves (0, n)");
  }
}

std::string OnePlusOneEaTarget::id() const {
  return std::string("ea-") + std::string(to_string(fn_));
}

double OnePlusOneEaTarget::run(const Configuration& c, std::size_t, int cutoff,
                               std::uint64_t seed) const {
  Engine rng = make_engine(seed);
  const double chi = space_.dim(0).decode(c[0]);
  return run_one_plus_one_ea(fn_, n_, chi, cutoff, init_, rng).final_fitness;
}

RlsKTarget::RlsKTarget(ParameterSpace space, Benchmark fn, int n)
    : space_(std::move(space)), fn_(fn), n_(n) {
  require_line(space_);
  for (int i = 1; i <= space_.range(0); ++i) {
    const double k = space_.dim(0).decode(i);
    if (k != std::round(k) || k < 1 || k > n_) throw ConfigError("k grid must hold integers in 1..n");
  }
}

std::string RlsKTarget::id() const { return std::string("rls-") + std::string(to_string(fn_)); }

double RlsKTarget::run(const Configuration& c, std::size_t, int cutoff, std::uint64_t seed) const {
  Engine rng = make_engine(seed);
  const int k = static_cast<int>(std::lround(space_.dim(0).decode(c[0])));
  return run_rls_k(fn_, n_, k, cutoff, rng).final_fitness;
}

}  // namespace ptune
