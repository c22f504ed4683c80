#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "ptune/rng.hpp"

namespace ptune {

/// One tuned parameter. Values are addressed by a 1-based index in
/// [1, count]; `decode` maps the index onto the real parameter value.
struct ParameterDim {
  std::string name;
  int count = 2;
  double offset = 0.0;
  double step = 1.0;

  double decode(int index) const { return offset + index * step; }
};

/// A point in a parameter space: one 1-based index per dimension.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<int> indices) : indices_(std::move(indices)) {}
  Configuration(std::initializer_list<int> indices) : indices_(indices) {}

  std::size_t size() const { return indices_.size(); }
  int operator[](std::size_t dim) const { return indices_[dim]; }
  int& operator[](std::size_t dim) { return indices_[dim]; }
  const std::vector<int>& indices() const { return indices_; }

  std::string to_string() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration&, const Configuration&) = default;

 private:
  std::vector<int> indices_;
};

/// The grid of all configurations. Immutable after construction.
class ParameterSpace {
 public:
  /// Throws ConfigError when empty, when a range is below 2, or when a
  /// decode step is zero.
  explicit ParameterSpace(std::vector<ParameterDim> dims);

  /// Single dimension with indices 1..count decoding to themselves.
  static ParameterSpace line(int count, std::string name = "x");

  std::size_t dimension_count() const { return dims_.size(); }
  const std::vector<ParameterDim>& dims() const { return dims_; }
  const ParameterDim& dim(std::size_t i) const { return dims_[i]; }
  int range(std::size_t i) const { return dims_[i].count; }

  /// M: the sum of all ranges.
  std::int64_t total_range() const;
  /// Number of configurations (product of ranges).
  std::uint64_t cardinality() const { return cardinality_; }

  bool contains(const Configuration& c) const;
  std::vector<double> decode(const Configuration& c) const;

  /// Row-major position of `c` with the last dimension varying fastest.
  std::uint64_t linear_index(const Configuration& c) const;
  Configuration at(std::uint64_t linear) const;

 private:
  std::vector<ParameterDim> dims_;
  std::uint64_t cardinality_ = 0;
};

/// Sum of per-dimension absolute index differences.
/// Throws ContractViolation on a dimension mismatch.
std::int64_t l1_distance(const Configuration& a, const Configuration& b);

/// All configurations that differ from `c` in exactly one index.
/// Has M - D elements.
std::vector<Configuration> neighborhood(const ParameterSpace& space, const Configuration& c);

Configuration sample_uniform(const ParameterSpace& space, Engine& rng);

}  // namespace ptune
