#include "ptune/space.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "ptune/errors.hpp"

namespace ptune {

std::string Configuration::to_string() const {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i) out << ',';
    out << indices_[i];
  }
  out << ')';
  return out.str();
}

ParameterSpace::ParameterSpace(std::vector<ParameterDim> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw ConfigError("parameter space needs at least one dimension");
  cardinality_ = 1;
  for (const auto& d : dims_) {
    if (d.count < 2) throw ConfigError("parameter '" + d.name + "' needs a range of at least 2");
    if (d.step == 0.0 || !std::isfinite(d.step) || !std::isfinite(d.offset)) {
      throw ConfigError("parameter '" + d.name + "' needs a finite non-zero decode step");
    }
    const auto count = static_cast<std::uint64_t>(d.count);
    if (cardinality_ > std::numeric_limits<std::uint64_t>::max() / count) {
      throw ConfigError("parameter space too large");
    }
    cardinality_ *= count;
  }
}

ParameterSpace ParameterSpace::line(int count, std::string name) {
  return ParameterSpace({ParameterDim{std::move(name), count, 0.0, 1.0}});
}

std::int64_t ParameterSpace::total_range() const {
  std::int64_t m = 0;
  for (const auto& d : dims_) m += d.count;
  return m;
}

bool ParameterSpace::contains(const Configuration& c) const {
  if (c.size() != dims_.size()) return false;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (c[i] < 1 || c[i] > dims_[i].count) return false;
  }
  return true;
}

std::vector<double> ParameterSpace::decode(const Configuration& c) const {
  if (!contains(c)) throw ContractViolation("configuration " + c.to_string() + " outside space");
  std::vector<double> values(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) values[i] = dims_[i].decode(c[i]);
  return values;
}

std::uint64_t ParameterSpace::linear_index(const Configuration& c) const {
  if (!contains(c)) throw ContractViolation("configuration " + c.to_string() + " outside space");
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    idx = idx * static_cast<std::uint64_t>(dims_[i].count) + static_cast<std::uint64_t>(c[i] - 1);
  }
  return idx;
}

Configuration ParameterSpace::at(std::uint64_t linear) const {
  if (linear >= cardinality_) throw ContractViolation("linear index outside space");
  std::vector<int> idx(dims_.size());
  for (std::size_t i = dims_.size(); i-- > 0;) {
    const auto count = static_cast<std::uint64_t>(dims_[i].count);
    idx[i] = static_cast<int>(linear % count) + 1;
    linear /= count;
  }
  return Configuration(std::move(idx));
}

std::int64_t l1_distance(const Configuration& a, const Configuration& b) {
  if (a.size() != b.size()) throw ContractViolation("l1_distance: dimension mismatch");
  std::int64_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

std::vector<Configuration> neighborhood(const ParameterSpace& space, const Configuration& c) {
  if (!space.contains(c)) throw ContractViolation("neighborhood: configuration outside space");
  std::vector<Configuration> out;
  out.reserve(static_cast<std::size_t>(space.total_range()) - space.dimension_count());
  for (std::size_t i = 0; i < space.dimension_count(); ++i) {
    for (int v = 1; v <= space.range(i); ++v) {
      if (v == c[i]) continue;
      Configuration n = c;
      n[i] = v;
      out.push_back(std::move(n));
    }
  }
  return out;
}

Configuration sample_uniform(const ParameterSpace& space, Engine& rng) {
  std::vector<int> idx(space.dimension_count());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = uniform_int(rng, 1, space.range(i));
  return Configuration(std::move(idx));
}

}  // namespace ptune
