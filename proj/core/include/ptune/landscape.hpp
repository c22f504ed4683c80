#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ptune/evaluation.hpp"
#include "ptune/rng.hpp"
#include "ptune/space.hpp"

namespace ptune {

/// A quality value for every configuration of a space; higher is better.
class Landscape {
 public:
  enum class Kind { exact, cached };

  /// `quality` is indexed by ParameterSpace::linear_index. With no explicit
  /// targets the target set is the single best configuration.
  Landscape(ParameterSpace space, std::vector<double> quality, Kind kind,
            std::vector<Configuration> targets = {});

  const ParameterSpace& space() const { return space_; }
  Kind kind() const { return kind_; }
  double quality(const Configuration& c) const { return quality_[space_.linear_index(c)]; }
  std::span<const double> values() const { return quality_; }
  const std::vector<Configuration>& targets() const { return targets_; }

  /// The `count` best configurations, ties broken by linear index.
  std::vector<Configuration> top(std::size_t count) const;
  Landscape with_targets(std::vector<Configuration> targets) const;
  /// Sub-grid keeping the first counts[i] values of every dimension.
  /// Targets are recomputed as the top `target_count` cells of the sub-grid.
  Landscape restricted(const std::vector<int>& counts, std::size_t target_count) const;

 private:
  ParameterSpace space_;
  std::vector<double> quality_;
  Kind kind_;
  std::vector<Configuration> targets_;
};

/// better() on a landscape compares stored qualities deterministically.
class LandscapeTarget final : public TargetAlgorithm {
 public:
  explicit LandscapeTarget(std::shared_ptr<const Landscape> landscape)
      : landscape_(std::move(landscape)) {}
  std::string id() const override;
  double run(const Configuration& c, std::size_t, int, std::uint64_t) const override {
    return landscape_->quality(c);
  }
  std::optional<double> exact_quality(const Configuration& c) const override {
    return landscape_->quality(c);
  }

 private:
  std::shared_ptr<const Landscape> landscape_;
};

/// A violating pair of 1-based positions.
struct UnimodalityWitness {
  int x = 0;
  int y = 0;
  friend bool operator==(const UnimodalityWitness&, const UnimodalityWitness&) = default;
};

/// Checks (alpha, beta)-approximate unimodality of a 1-D quality profile:
/// for every x at distance i >= beta from the optimum and every y at
/// distance j > alpha * i, x must be strictly better than y. Equal quality
/// counts as a violation. Returns the lexicographically smallest violating
/// (x, y), or nullopt when the condition holds.
/// Throws ConfigError if the best quality is not attained uniquely.
std::optional<UnimodalityWitness> check_approx_unimodal(std::span<const double> quality,
                                                        double alpha, int beta);
std::optional<UnimodalityWitness> check_approx_unimodal(const Landscape& landscape, double alpha,
                                                        int beta);

/// 1-based position of the unique best value. Throws ConfigError otherwise.
int unique_optimum_position(std::span<const double> quality);

struct CertificatePoint {
  double alpha = 1.0;
  int beta = 1;
};

struct UnimodalityCertificate {
  /// Smallest alpha on the grid for every beta in 1..m.
  std::vector<CertificatePoint> per_beta;
  /// Pareto-optimal (alpha, beta) pairs, beta ascending.
  std::vector<CertificatePoint> pareto;
};

UnimodalityCertificate minimal_certificate(std::span<const double> quality, double alpha_step = 0.01);

/// Axis-parallel slice check of a multi-dimensional landscape.
struct SliceReport {
  std::size_t dimension = 0;
  Configuration anchor;  // the slice varies `dimension` and fixes the rest
  bool unique_optimum = true;
  std::optional<UnimodalityWitness> witness;
};
std::vector<SliceReport> check_slices(const Landscape& landscape, double alpha, int beta);

enum class SyntheticKind { unimodal, plateau, sawtooth, deceptive };
std::string_view to_string(SyntheticKind kind);
SyntheticKind parse_synthetic_kind(std::string_view text);

/// Exact 1-D landscape over m positions with the optimum at `optimum`.
///   unimodal:  quality strictly decreasing in the distance to the optimum
///   plateau:   flat except for the optimum
///   sawtooth:  rugged but (alpha, 1)-approximately unimodal; distances are
///              grouped into blocks [b_k, b_{k+1}) with
///              b_{k+1} = floor(alpha * b_k) + 1, worse block by block but
///              improving with distance inside a block
///   deceptive: quality increasing with distance except for the optimum
/// Throws ConfigError if m < 2 or the optimum lies outside 1..m.
Landscape generate_synthetic(SyntheticKind kind, int m, int optimum, double sawtooth_alpha = 2.0);
/// As above with the optimum drawn uniformly.
Landscape generate_synthetic(SyntheticKind kind, int m, Engine& rng, double sawtooth_alpha = 2.0);

/// Cached landscape CSV: header `<dim names...>,quality`; one row per cell
/// with 1-based indices. The target set is the `target_count` best cells.
/// Throws ParseError on malformed rows or duplicates and ConfigError
/// listing any absent cells.
Landscape parse_cached_landscape(std::istream& in, std::size_t target_count = 5);
Landscape load_cached_landscape(const std::string& path, std::size_t target_count = 5);
void write_cached_landscape(const Landscape& landscape, std::ostream& out);
void write_cached_landscape(const Landscape& landscape, const std::string& path);

}  // namespace ptune
