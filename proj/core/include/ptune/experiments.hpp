#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptune/configurators.hpp"
#include "ptune/evaluation.hpp"
#include "ptune/landscape.hpp"
#include "ptune/operators.hpp"
#include "ptune/space.hpp"

namespace ptune {

enum class Family { ridge_ea, leadingones_ea, onemax_rls, saps_cached, synthetic };
enum class ConfiguratorKind { param_rls, param_ils };

std::string_view to_string(Family f);
Family parse_family(std::string_view text);
std::string_view to_string(ConfiguratorKind k);
ConfiguratorKind parse_configurator(std::string_view text);

/// Everything needed to reproduce one experiment series.
struct ScenarioSpec {
  Family family = Family::synthetic;
  ConfiguratorKind configurator = ConfiguratorKind::param_rls;
  OperatorSpec op;
  /// When unset the family's ell is used (1, or 2 for onemax-rls).
  std::optional<int> max_step;
  ParamIlsSettings ils;
  /// ParamILS settings that fell back to defaults the experiments never fixed.
  bool ils_s_defaulted = true;
  bool ils_restart_defaulted = true;

  int runs = 50;                  // r
  std::optional<int> cutoff;      // kappa; family default when unset
  int n = 50;                     // bit-string length of benchmark targets
  std::vector<int> sizes;         // strictly increasing
  int repetitions = 50;
  std::uint64_t seed = 1;

  std::string landscape_path;     // saps-cached
  std::shared_ptr<const Landscape> cached_landscape;  // overrides landscape_path
  std::size_t target_count = 5;   // saps-cached

  SyntheticKind synthetic_kind = SyntheticKind::unimodal;
  double sawtooth_alpha = 2.0;

  bool accept_ties = true;
  std::uint64_t max_calls = 0;    // 0: no safety budget
  unsigned threads = 0;           // 0: TUNE_THREADS or hardware concurrency

  void validate() const;
};

/// Full-scale constants for a family: grid, kappa, ell, full size schedule,
/// desk-scale r = 50 and 50 repetitions.
ScenarioSpec default_scenario(Family family);
/// Switches r and repetitions to 1500 and 200 (500 for saps-cached).
void apply_full_scale(ScenarioSpec& spec);
/// Space sizes `build_scenario` accepts for a family (empty for synthetic,
/// which accepts any size >= 2).
std::vector<int> legal_sizes(Family family);

/// One space size of a scenario, ready to run.
struct ScenarioInstance {
  ParameterSpace space;
  EvalProtocol eval;
  std::vector<Configuration> targets;
  OperatorSpec op;
};

/// Materializes the family's grid for `size` configurations:
///   ridge-ea        chi in {0.5, 1.0, ...}, optimum chi = 1.0, kappa 2500, ridge start
///   leadingones-ea  chi in {0.6, 1.1, ...}, optimum chi = 1.6, kappa 2500
///   onemax-rls      k in {1, 2, ...}, optimum k = 1, kappa 200, ell 2
///   saps-cached     16 rho values x size/16 alpha values of a cached landscape,
///                   targets = best target_count cells of that sub-grid
///   synthetic       generated 1-D landscape with `size` positions
/// Throws ConfigError for sizes outside the family's schedule.
ScenarioInstance build_scenario(const ScenarioSpec& spec, int size);

struct TrialRecord {
  std::string family;
  std::string configurator;
  std::string op;
  int space_size = 0;
  int repetition = 0;
  std::uint64_t seed = 0;
  /// Calls to better() before a target was generated; empty on failure.
  std::optional<std::uint64_t> better_calls;
  std::string accounting_mode;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// Seed of one repetition; independent of thread count and run order.
std::uint64_t repetition_seed(const ScenarioSpec& spec, int size, int repetition);

/// Runs every (size, repetition) with the first-target-sampled stop rule.
/// Records come back sorted by (size, repetition). Failed repetitions are
/// kept with an empty better_calls and a `failed:` accounting mode.
std::vector<TrialRecord> run_scenario(const ScenarioSpec& spec);

/// key=value lines describing the settings behind a scenario's records,
/// flagging defaults that are not taken from the experiments being reproduced.
std::vector<std::string> scenario_metadata(const ScenarioSpec& spec);

struct SummaryRow {
  std::string family;
  std::string configurator;
  std::string op;
  int space_size = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  std::optional<double> p_value;       // candidate rows only
  std::optional<double> cliffs_delta;  // positive when the candidate needs fewer calls
  std::size_t n = 0;
};

/// Per (family, configurator, size): one row each for baseline and candidate
/// operator; the candidate row carries Mann-Whitney p and Cliff's delta of
/// baseline calls versus candidate calls. Throws ConfigError naming any
/// (family, configurator, size) present for only one operator.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records,
                                  std::string_view baseline, std::string_view candidate);

void emit_raw_csv(const std::vector<TrialRecord>& records, std::ostream& out);
void emit_raw_csv(const std::vector<TrialRecord>& records, const std::string& path);
std::vector<TrialRecord> parse_raw_csv(std::istream& in);
std::vector<TrialRecord> load_raw_csv(const std::string& path);

void emit_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);
void emit_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path);

/// Worker count: `requested` if non-zero, else TUNE_THREADS, else hardware
/// concurrency; always at least 1.
unsigned worker_threads(unsigned requested = 0);

}  // namespace ptune
