#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "ptune/errors.hpp"
#include "ptune/experiments.hpp"
#include "ptune/sat.hpp"
#include "ptune/stats.hpp"

using namespace ptune;

namespace {

ScenarioSpec synthetic_spec(std::vector<int> sizes, int reps, OperatorKind kind = OperatorKind::l_step) {
  ScenarioSpec spec = default_scenario(Family::synthetic);
  spec.sizes = std::move(sizes);
  spec.repetitions = reps;
  spec.op.kind = kind;
  spec.seed = 42;
  return spec;
}

std::vector<double> calls_at(const std::vector<TrialRecord>& records, int size) {
  std::vector<double> out;
  for (const auto& r : records) {
    if (r.space_size == size && r.better_calls) out.push_back(static_cast<double>(*r.better_calls));
  }
  return out;
}

std::string raw_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  emit_raw_csv(records, out);
  return out.str();
}

}  // namespace

TEST(BuildScenario, RidgeGridOfTen) {
  const auto inst = build_scenario(default_scenario(Family::ridge_ea), 10);
  ASSERT_EQ(inst.space.dimension_count(), 1u);
  EXPECT_EQ(inst.space.range(0), 10);
  EXPECT_DOUBLE_EQ(inst.space.dim(0).decode(1), 0.5);
  EXPECT_DOUBLE_EQ(inst.space.dim(0).decode(10), 5.0);
  EXPECT_EQ(inst.targets, (std::vector<Configuration>{Configuration{2}}));
  EXPECT_EQ(inst.eval.cutoff, 2500);
  EXPECT_EQ(inst.op.max_step, 1);
}

TEST(BuildScenario, LeadingOnesAndOneMaxGrids) {
  const auto lo = build_scenario(default_scenario(Family::leadingones_ea), 50);
  EXPECT_NEAR(lo.space.dim(0).decode(1), 0.6, 1e-12);
  EXPECT_NEAR(lo.space.dim(0).decode(50), 25.1, 1e-12);
  EXPECT_NEAR(lo.space.dim(0).decode(lo.targets.at(0)[0]), 1.6, 1e-12);

  const auto om = build_scenario(default_scenario(Family::onemax_rls), 10);
  EXPECT_DOUBLE_EQ(om.space.dim(0).decode(1), 1.0);
  EXPECT_DOUBLE_EQ(om.space.dim(0).decode(10), 10.0);
  EXPECT_EQ(om.op.max_step, 2);
  EXPECT_EQ(om.eval.cutoff, 200);
}

TEST(BuildScenario, SapsSubGridOfFortyEight) {
  // Quality rises with alpha index and falls with rho index.
  std::vector<double> q;
  const auto grid = saps_grid(30, 16);
  for (int a = 1; a <= 30; ++a) {
    for (int r = 1; r <= 16; ++r) q.push_back(a * 100.0 - r);
  }
  ScenarioSpec spec = default_scenario(Family::saps_cached);
  spec.cached_landscape = std::make_shared<const Landscape>(grid, q, Landscape::Kind::cached);
  const auto inst = build_scenario(spec, 48);
  EXPECT_EQ(inst.space.cardinality(), 48u);
  EXPECT_EQ(inst.space.range(0), 3);
  EXPECT_EQ(inst.space.range(1), 16);
  EXPECT_NEAR(inst.space.dim(0).decode(1), 16.0 / 15.0, 1e-12);
  EXPECT_NEAR(inst.space.dim(0).decode(3), 18.0 / 15.0, 1e-12);
  ASSERT_EQ(inst.targets.size(), 5u);
  for (const auto& t : inst.targets) EXPECT_EQ(t[0], 3);
}

TEST(BuildScenario, IllegalSizesAreRejected) {
  EXPECT_THROW(build_scenario(default_scenario(Family::ridge_ea), 7), ConfigError);
  EXPECT_THROW(build_scenario(default_scenario(Family::onemax_rls), 55), ConfigError);
  EXPECT_THROW(build_scenario(default_scenario(Family::synthetic), 1), ConfigError);
  EXPECT_THROW(parse_family("tsp"), ConfigError);
}

TEST(ScenarioValidation, RejectsBadSettings) {
  auto spec = synthetic_spec({8}, 0);
  EXPECT_THROW(run_scenario(spec), ConfigError);
  spec = synthetic_spec({8, 8}, 3);
  EXPECT_THROW(spec.validate(), ConfigError);
  spec = synthetic_spec({8}, 3, OperatorKind::random_with_replacement);
  spec.configurator = ConfiguratorKind::param_ils;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec = default_scenario(Family::saps_cached);
  EXPECT_THROW(spec.validate(), ConfigError);
}

TEST(RunScenario, TwoPointSpaceNeedsNoComparisons) {
  // The stop rule halts as soon as the optimum is generated, before the call
  // that would compare it, so a two-point space never reaches a comparison.
  const auto records = run_scenario(synthetic_spec({2}, 10000));
  ASSERT_EQ(records.size(), 10000u);
  EXPECT_DOUBLE_EQ(mean(calls_at(records, 2)), 0.0);
}

TEST(RunScenario, RidgeSizeTenHarmonicBeatsLStep) {
  ScenarioSpec spec = default_scenario(Family::ridge_ea);
  spec.sizes = {10};
  spec.seed = 5;
  const auto lstep = run_scenario(spec);
  spec.op.kind = OperatorKind::harmonic;
  const auto hs = run_scenario(spec);
  const auto a = calls_at(lstep, 10), b = calls_at(hs, 10);
  ASSERT_EQ(a.size(), 50u);
  ASSERT_EQ(b.size(), 50u);
  EXPECT_LT(mean(b), mean(a));
}

TEST(RunScenario, RecordsAreSortedAndIdenticalAcrossThreadCounts) {
  auto spec = synthetic_spec({16, 64}, 40, OperatorKind::harmonic);
  spec.threads = 1;
  const auto one = run_scenario(spec);
  spec.threads = 3;
  const auto three = run_scenario(spec);
  EXPECT_EQ(raw_csv(one), raw_csv(three));
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].space_size, i < 40 ? 16 : 64);
    EXPECT_EQ(one[i].repetition, static_cast<int>(i % 40));
  }
}

TEST(RunScenario, MeanCallsGrowWithSpaceSize) {
  for (auto kind : {OperatorKind::l_step, OperatorKind::random, OperatorKind::harmonic}) {
    const std::vector<int> sizes{8, 32, 128};
    const auto records = run_scenario(synthetic_spec(sizes, 300, kind));
    for (std::size_t i = 1; i < sizes.size(); ++i) {
      const auto lo = calls_at(records, sizes[i - 1]), hi = calls_at(records, sizes[i]);
      EXPECT_GE(mean(hi) + 2 * standard_error(hi), mean(lo) - 2 * standard_error(lo))
          << to_string(kind) << " at " << sizes[i];
    }
  }
}

TEST(RunScenario, RecordedCallsMatchDirectRuns) {
  for (auto conf : {ConfiguratorKind::param_rls, ConfiguratorKind::param_ils}) {
    auto spec = synthetic_spec({50}, 25, OperatorKind::harmonic);
    spec.configurator = conf;
    const auto records = run_scenario(spec);
    const auto inst = build_scenario(spec, 50);
    std::uint64_t recorded = 0, direct = 0;
    for (const auto& r : records) {
      ASSERT_EQ(r.seed, repetition_seed(spec, 50, r.repetition));
      const auto stop = StopRule::first_target_sampled(inst.targets).with_budget(spec.max_calls);
      const auto trace = conf == ConfiguratorKind::param_rls
                             ? run_param_rls(inst.space, inst.op, inst.eval, stop, r.seed)
                             : run_param_ils(inst.space, spec.ils, inst.op, inst.eval, stop, r.seed);
      recorded += r.better_calls.value();
      direct += trace.better_calls;
    }
    EXPECT_EQ(recorded, direct);
  }
}

TEST(RunScenario, BudgetExhaustionIsRecordedAsFailure) {
  auto spec = synthetic_spec({200}, 5);
  spec.synthetic_kind = SyntheticKind::plateau;
  spec.max_calls = 3;
  const auto records = run_scenario(spec);
  ASSERT_EQ(records.size(), 5u);
  int failures = 0;
  for (const auto& r : records) {
    if (!r.better_calls) {
      ++failures;
      EXPECT_EQ(r.accounting_mode, "failed:call budget of 3 exhausted");
    }
  }
  EXPECT_GT(failures, 0);
  EXPECT_NE(raw_csv(records).find("failed:"), std::string::npos);
}

TEST(RunScenario, AccountingModeLabelsBestOfBoth) {
  auto spec = synthetic_spec({16}, 2, OperatorKind::harmonic);
  spec.op.direction = DirectionMode::best_of_both;
  const auto records = run_scenario(spec);
  EXPECT_EQ(records.at(0).op, "harmonic-both");
  EXPECT_EQ(records.at(0).accounting_mode, "all-calls+intra-mutation");
}

TEST(Metadata, FlagsUnfixedIlsSettings) {
  auto spec = synthetic_spec({16}, 2, OperatorKind::harmonic);
  spec.configurator = ConfiguratorKind::param_ils;
  const auto meta = scenario_metadata(spec);
  auto has = [&](const std::string& line) { return std::find(meta.begin(), meta.end(), line) != meta.end(); };
  EXPECT_TRUE(has("ils.s=3 (assumed default)"));
  EXPECT_TRUE(has("ils.p_restart=0.01 (assumed default)"));
  spec.ils_s_defaulted = false;
  EXPECT_TRUE(std::find(scenario_metadata(spec).begin(), scenario_metadata(spec).end(), "ils.s=3") !=
              scenario_metadata(spec).end());
}

TEST(RawCsv, HeaderOnlyForNoRecords) {
  EXPECT_EQ(raw_csv({}), "family,configurator,operator,space_size,repetition,seed,better_calls,accounting_mode\n");
}

TEST(RawCsv, ThreeRecordsGiveFourLinesAndRoundTrip) {
  std::vector<TrialRecord> records(3);
  for (int i = 0; i < 3; ++i) {
    records[i] = {"synthetic", "paramrls", "lstep", 8, i, 1000u + static_cast<std::uint64_t>(i), 7u * i, "all-calls"};
  }
  records[2].better_calls.reset();
  records[2].accounting_mode = "failed:boom";
  const auto text = raw_csv(records);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  std::istringstream in(text);
  EXPECT_EQ(parse_raw_csv(in), records);
}

TEST(RawCsv, MalformedInputReportsTheLine) {
  std::istringstream in("family,configurator,operator,space_size,repetition,seed,better_calls,accounting_mode\n"
                        "synthetic,paramrls,lstep,8,0,1,2,all-calls\nsynthetic,paramrls\n");
  try {
    parse_raw_csv(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Summarize, IdenticalRecordSetsShowNoEffect) {
  auto spec = synthetic_spec({32}, 30);
  auto records = run_scenario(spec);
  auto copy = records;
  for (auto& r : copy) r.op = "harmonic";
  records.insert(records.end(), copy.begin(), copy.end());
  const auto rows = summarize(records, "lstep", "harmonic");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_FALSE(rows[0].p_value.has_value());
  EXPECT_DOUBLE_EQ(*rows[1].cliffs_delta, 0.0);
  EXPECT_GE(*rows[1].p_value, 0.99);
  EXPECT_EQ(rows[1].n, 30u);
}

TEST(Summarize, DominatedCandidateHasNegativeDelta) {
  std::vector<TrialRecord> records;
  for (int i = 0; i < 10; ++i) {
    records.push_back({"synthetic", "paramrls", "lstep", 8, i, 0, static_cast<std::uint64_t>(i), "all-calls"});
    records.push_back({"synthetic", "paramrls", "harmonic", 8, i, 0, static_cast<std::uint64_t>(i + 20), "all-calls"});
  }
  const auto rows = summarize(records, "lstep", "harmonic");
  EXPECT_DOUBLE_EQ(*rows.at(1).cliffs_delta, -1.0);
  EXPECT_LT(*rows.at(1).p_value, 0.001);
}

TEST(Summarize, MissingPairingNamesTheGap) {
  std::vector<TrialRecord> records{{"synthetic", "paramrls", "lstep", 8, 0, 0, 3u, "all-calls"},
                                   {"synthetic", "paramrls", "harmonic", 8, 0, 0, 2u, "all-calls"},
                                   {"synthetic", "paramrls", "lstep", 16, 0, 0, 3u, "all-calls"}};
  try {
    summarize(records, "lstep", "harmonic");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("16"), std::string::npos) << e.what();
  }
}

TEST(SummaryCsv, Header) {
  std::ostringstream out;
  emit_summary_csv({}, out);
  EXPECT_EQ(out.str(), "family,configurator,operator,space_size,mean,stderr,p_value,cliffs_delta,n\n");
}

TEST(WorkerThreads, RespectsRequestAndEnvironment) {
  EXPECT_EQ(worker_threads(3), 3u);
  ::setenv("TUNE_THREADS", "2", 1);
  EXPECT_LE(worker_threads(0), 2u);
  EXPECT_GE(worker_threads(0), 1u);
  ::unsetenv("TUNE_THREADS");
}
