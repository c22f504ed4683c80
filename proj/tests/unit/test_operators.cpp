#include <gtest/gtest.h>

#include <map>
#include <set>

#include "oracles.hpp"
#include "ptune/errors.hpp"
#include "ptune/operators.hpp"

using namespace ptune;

namespace {

// Counts every better() request and answers with a fixed preference.
class FixedPreference final : public MutationContext {
 public:
  explicit FixedPreference(bool second) : second_(second) {}
  bool prefers_second(const Configuration&, const Configuration&) override {
    ++calls;
    return second_;
  }
  void observe(const Configuration& c) override { seen.push_back(c); }
  int calls = 0;
  std::vector<Configuration> seen;

 private:
  bool second_;
};

template <typename Draw>
std::map<int, double> frequencies(int draws, Draw draw) {
  std::map<int, double> f;
  for (int i = 0; i < draws; ++i) f[draw()] += 1.0 / draws;
  return f;
}

}  // namespace

TEST(HarmonicDistribution, RejectsRangeBelowTwo) { EXPECT_THROW(HarmonicDistribution(1), ConfigError); }

TEST(HarmonicDistribution, RangeTwoAlwaysStepsOne) {
  HarmonicDistribution h(2);
  Engine rng = make_engine(1);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(h.sample(rng), 1);
  EXPECT_DOUBLE_EQ(h.probability(1), 1.0);
}

TEST(HarmonicDistribution, RangeFourClosedForm) {
  HarmonicDistribution h(4);
  EXPECT_NEAR(h.harmonic_number(), 11.0 / 6.0, 1e-15);
  EXPECT_NEAR(h.probability(1), 6.0 / 11.0, 1e-15);
  EXPECT_NEAR(h.probability(2), 3.0 / 11.0, 1e-15);
  EXPECT_NEAR(h.probability(3), 2.0 / 11.0, 1e-15);
  EXPECT_NEAR(h.cumulative()[0], 6.0 / 11.0, 1e-15);
  EXPECT_NEAR(h.cumulative()[1], 9.0 / 11.0, 1e-15);
}

TEST(HarmonicDistribution, CumulativeTableMatchesClosedFormExhaustively) {
  for (int phi = 2; phi <= 300; ++phi) {
    HarmonicDistribution h(phi);
    double acc = 0.0, total = 0.0;
    for (int d = 1; d < phi; ++d) {
      acc += h.probability(d);
      total += 1.0 / (d * h.harmonic_number());
      EXPECT_NEAR(h.cumulative()[static_cast<std::size_t>(d - 1)], acc, 1e-12);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_EQ(h.cumulative().back(), 1.0);
  }
}

TEST(HarmonicDistribution, FiftyValuesPassChiSquare) {
  HarmonicDistribution h(50);
  Engine rng = make_engine(2);
  std::vector<long long> counts(49, 0);
  for (int i = 0; i < 1000000; ++i) {
    const int d = h.sample(rng);
    ASSERT_GE(d, 1);
    ASSERT_LE(d, 49);
    ++counts[static_cast<std::size_t>(d - 1)];
  }
  std::vector<double> p;
  for (int d = 1; d < 50; ++d) p.push_back(h.probability(d));
  EXPECT_GT(oracle::chi_square_p(counts, p), 0.01);
}

TEST(LStep, InteriorEllOneIsSymmetric) {
  auto space = ParameterSpace::line(10);
  Engine rng = make_engine(3);
  auto f = frequencies(200000, [&] { return mutate_l_step(space, Configuration{5}, 1, rng)[0]; });
  ASSERT_EQ(f.size(), 2u);
  EXPECT_NEAR(f[4], 0.5, 3 * std::sqrt(0.25 / 200000));
  EXPECT_NEAR(f[6], 0.5, 3 * std::sqrt(0.25 / 200000));
}

TEST(LStep, BoundaryHasOneFeasibleMove) {
  auto space = ParameterSpace::line(10);
  Engine rng = make_engine(4);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(mutate_l_step(space, Configuration{1}, 1, rng), Configuration{2});
}

TEST(LStep, EllTwoUniformOverFourTargets) {
  auto space = ParameterSpace::line(10);
  Engine rng = make_engine(5);
  auto f = frequencies(200000, [&] { return mutate_l_step(space, Configuration{5}, 2, rng)[0]; });
  ASSERT_EQ(f.size(), 4u);
  for (int v : {3, 4, 6, 7}) EXPECT_NEAR(f[v], 0.25, 0.005) << v;
}

TEST(RandomMutation, ThreeValuesFromTheMiddle) {
  auto space = ParameterSpace::line(3);
  OperatorState state(space);
  Engine rng = make_engine(6);
  auto f = frequencies(100000, [&] { return mutate_random(space, Configuration{2}, state, false, rng)[0]; });
  ASSERT_EQ(f.size(), 2u);
  EXPECT_NEAR(f[1], 0.5, 0.01);
}

TEST(RandomMutation, WithoutReplacementSkipsEarlierProposals) {
  auto space = ParameterSpace::line(4);
  Engine rng = make_engine(7);
  std::map<int, int> counts;
  for (int i = 0; i < 40000; ++i) {
    OperatorState state(space);
    state.mark(0, 4);
    const int v = mutate_random(space, Configuration{2}, state, true, rng)[0];
    ++counts[v];
  }
  ASSERT_EQ(counts.size(), 2u);
  EXPECT_NEAR(counts[1] / 40000.0, 0.5, 0.015);
  EXPECT_NEAR(counts[3] / 40000.0, 0.5, 0.015);
}

TEST(RandomMutation, TwoByTwoChangesOneDimension) {
  ParameterSpace space({ParameterDim{"a", 2}, ParameterDim{"b", 2}});
  OperatorState state(space);
  Engine rng = make_engine(8);
  std::map<Configuration, int> counts;
  for (int i = 0; i < 40000; ++i) ++counts[mutate_random(space, Configuration{1, 1}, state, false, rng)];
  ASSERT_EQ(counts.size(), 2u);
  EXPECT_NEAR(counts[(Configuration{2, 1})] / 40000.0, 0.5, 0.015);
}

TEST(RandomMutation, ExhaustionIsSignalled) {
  auto space = ParameterSpace::line(3);
  OperatorState state(space);
  Engine rng = make_engine(9);
  mutate_random(space, Configuration{2}, state, true, rng);
  mutate_random(space, Configuration{2}, state, true, rng);
  EXPECT_THROW(mutate_random(space, Configuration{2}, state, true, rng), NeighborhoodExhausted);
}

TEST(RandomMutation, WithoutReplacementNeverRepeatsAValue) {
  ParameterSpace space({ParameterDim{"a", 12}, ParameterDim{"b", 9}});
  Engine rng = make_engine(10);
  for (int trial = 0; trial < 200; ++trial) {
    OperatorState state(space);
    std::set<std::pair<std::size_t, int>> proposed;
    const Configuration c{5, 4};
    for (;;) {
      try {
        const auto n = mutate_random(space, c, state, true, rng);
        const std::size_t dim = n[0] != c[0] ? 0 : 1;
        EXPECT_TRUE(proposed.emplace(dim, n[dim]).second);
      } catch (const NeighborhoodExhausted&) {
        break;
      }
    }
  }
}

TEST(Harmonic, RangeTwoMovesToTheOtherValue) {
  auto space = ParameterSpace::line(2);
  HarmonicDistribution h(2);
  Engine rng = make_engine(11);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(mutate_harmonic(space, {&h, 1}, Configuration{1}, DirectionMode::random_direction, nullptr, rng),
              Configuration{2});
  }
}

TEST(Harmonic, FiveValuesFromTheMiddleUnderFullRejection) {
  // d in {3, 4} is infeasible both ways and redrawn, so the accepted mass is
  // P(d=1) + P(d=2) = 18/25 and each neighbor at d=1 gets (6/25) / (18/25).
  auto space = ParameterSpace::line(5);
  HarmonicDistribution h(5);
  Engine rng = make_engine(12);
  const int draws = 300000;
  auto f = frequencies(draws, [&] {
    return mutate_harmonic(space, {&h, 1}, Configuration{3}, DirectionMode::random_direction, nullptr, rng)[0];
  });
  const double sigma = std::sqrt((1.0 / 3) * (2.0 / 3) / draws);
  EXPECT_NEAR(f[2], 1.0 / 3.0, 4 * sigma);
  EXPECT_NEAR(f[4], 1.0 / 3.0, 4 * sigma);
  EXPECT_NEAR(f[1], 1.0 / 6.0, 4 * sigma);
  EXPECT_NEAR(f[5], 1.0 / 6.0, 4 * sigma);
}

TEST(Harmonic, BestOfBothComparesOnlyWhenBothSidesAreFeasible) {
  auto space = ParameterSpace::line(9);
  HarmonicDistribution h(9);
  Engine rng = make_engine(13);
  FixedPreference ctx(true);
  int both = 0;
  for (int i = 0; i < 2000; ++i) {
    const int before = ctx.calls;
    const auto c = mutate_harmonic(space, {&h, 1}, Configuration{3}, DirectionMode::best_of_both, &ctx, rng);
    const int d = std::abs(c[0] - 3);
    EXPECT_GE(d, 1);
    if (d <= 2) {
      EXPECT_EQ(ctx.calls, before + 1);
      ++both;
    } else {
      EXPECT_EQ(ctx.calls, before);
    }
  }
  EXPECT_GT(both, 0);
  EXPECT_THROW(mutate_harmonic(space, {&h, 1}, Configuration{3}, DirectionMode::best_of_both, nullptr, rng),
               ContractViolation);
}

TEST(Operators, ResultsStayInBoundsAndChangeOneDimension) {
  ParameterSpace space({ParameterDim{"a", 6}, ParameterDim{"b", 2}, ParameterDim{"c", 17}});
  Engine rng = make_engine(14);
  FixedPreference ctx(false);
  for (auto kind : {OperatorKind::l_step, OperatorKind::random, OperatorKind::random_with_replacement,
                    OperatorKind::harmonic}) {
    for (auto mode : {DirectionMode::random_direction, DirectionMode::best_of_both}) {
      Mutator m(space, OperatorSpec{kind, 3, mode});
      Configuration c = sample_uniform(space, rng);
      for (int i = 0; i < 3000; ++i) {
        const auto n = m.mutate(c, ctx, rng);
        ASSERT_TRUE(space.contains(n));
        int changed = 0;
        for (std::size_t d = 0; d < 3; ++d) changed += n[d] != c[d];
        ASSERT_EQ(changed, 1);
        if (i % 7 == 0) c = n;
      }
    }
  }
}

TEST(Operators, NamesRoundTrip) {
  for (auto k : {OperatorKind::l_step, OperatorKind::random, OperatorKind::random_with_replacement,
                 OperatorKind::harmonic}) {
    EXPECT_EQ(parse_operator_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_operator_kind("simplex"), ConfigError);
  EXPECT_EQ(parse_direction_mode("best-of-both"), DirectionMode::best_of_both);
}

TEST(RandomNeighbor, UniformOverTheNeighborhood) {
  ParameterSpace space({ParameterDim{"a", 3}, ParameterDim{"b", 4}});
  Engine rng = make_engine(15);
  std::map<Configuration, long long> counts;
  for (int i = 0; i < 100000; ++i) ++counts[random_neighbor(space, Configuration{2, 3}, rng)];
  const auto n = neighborhood(space, Configuration{2, 3});
  ASSERT_EQ(counts.size(), n.size());
  std::vector<long long> observed;
  for (const auto& c : n) observed.push_back(counts[c]);
  EXPECT_GT(oracle::chi_square_p(observed, std::vector<double>(n.size(), 1.0 / n.size())), 0.01);
}
