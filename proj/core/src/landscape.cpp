#include "ptune/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ptune/csv.hpp"
#include "ptune/errors.hpp"

namespace ptune {

namespace {

constexpr double kDistanceEps = 1e-9;

// Strict "j > alpha * i" on integer distances, robust to alpha * i landing
// a rounding error above an integer.
bool farther(int j, double alpha, int i) { return j > alpha * i + kDistanceEps; }

}  // namespace

Landscape::Landscape(ParameterSpace space, std::vector<double> quality, Kind kind,
                     std::vector<Configuration> targets)
    : space_(std::move(space)), quality_(std::move(quality)), kind_(kind), targets_(std::move(targets)) {
  if (quality_.size() != space_.cardinality()) {
    throw ConfigError("landscape has " + std::to_string(quality_.size()) + " values for " +
                      std::to_string(space_.cardinality()) + " configurations");
  }
  for (double q : quality_) {
    if (!std::isfinite(q)) throw ConfigError("landscape qualities must be finite");
  }
  if (targets_.empty()) targets_ = top(1);
  for (const auto& t : targets_) {
    if (!space_.contains(t)) throw ConfigError("target " + t.to_string() + " lies outside the space");
  }
}

std::vector<Configuration> Landscape::top(std::size_t count) const {
  std::vector<std::uint64_t> order(quality_.size());
  std::iota(order.begin(), order.end(), std::uint64_t{0});
  count = std::min(count, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(),
                    [&](std::uint64_t a, std::uint64_t b) {
                      if (quality_[a] != quality_[b]) return quality_[a] > quality_[b];
                      return a < b;
                    });
  std::vector<Configuration> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(space_.at(order[i]));
  return out;
}

Landscape Landscape::with_targets(std::vector<Configuration> targets) const {
  if (targets.empty()) throw ConfigError("target set must not be empty");
  return Landscape(space_, quality_, kind_, std::move(targets));
}

Landscape Landscape::restricted(const std::vector<int>& counts, std::size_t target_count) const {
  if (counts.size() != space_.dimension_count()) throw ConfigError("restriction needs one count per dimension");
  if (target_count == 0) throw ConfigError("target count must be at least 1");
  std::vector<ParameterDim> dims = space_.dims();
  for (std::size_t d = 0; d < dims.size(); ++d) {
    if (counts[d] < 2 || counts[d] > dims[d].count) {
      throw ConfigError("restricted range for '" + dims[d].name + "' must lie in 2.." +
                        std::to_string(dims[d].count));
    }
    dims[d].count = counts[d];
  }
  ParameterSpace sub(std::move(dims));
  std::vector<double> q(sub.cardinality());
  for (std::uint64_t k = 0; k < q.size(); ++k) q[k] = quality(sub.at(k));
  Landscape tmp(sub, q, kind_);
  auto targets = tmp.top(target_count);
  return Landscape(std::move(sub), std::move(q), kind_, std::move(targets));
}

std::string LandscapeTarget::id() const {
  return landscape_->kind() == Landscape::Kind::exact ? "exact-landscape" : "cached-landscape";
}

int unique_optimum_position(std::span<const double> quality) {
  if (quality.empty()) throw ConfigError("empty quality profile");
  const auto best = std::max_element(quality.begin(), quality.end());
  if (std::count(quality.begin(), quality.end(), *best) != 1) {
    throw ConfigError("approximate unimodality needs a unique optimum");
  }
  return static_cast<int>(best - quality.begin()) + 1;
}

std::optional<UnimodalityWitness> check_approx_unimodal(std::span<const double> quality, double alpha,
                                                        int beta) {
  const int m = static_cast<int>(quality.size());
  if (!(alpha >= 1.0)) throw ConfigError("alpha must be at least 1");
  if (beta < 1 || beta > m) throw ConfigError("beta must lie in 1..m");
  const int opt = unique_optimum_position(quality);
  // Minimization orientation f = -quality: x must satisfy f(x) < f(y),
  // that is quality(x) > quality(y), for every y farther than alpha * i.
  for (int x = 1; x <= m; ++x) {
    const int i = std::abs(x - opt);
    if (i < beta) continue;
    const double qx = quality[static_cast<std::size_t>(x - 1)];
    for (int y = 1; y <= m; ++y) {
      const int j = std::abs(y - opt);
      if (farther(j, alpha, i) && !(qx > quality[static_cast<std::size_t>(y - 1)])) {
        return UnimodalityWitness{x, y};
      }
    }
  }
  return std::nullopt;
}

std::optional<UnimodalityWitness> check_approx_unimodal(const Landscape& landscape, double alpha,
                                                        int beta) {
  if (landscape.space().dimension_count() != 1) {
    throw ConfigError("approximate unimodality is defined on one-dimensional landscapes");
  }
  return check_approx_unimodal(landscape.values(), alpha, beta);
}

UnimodalityCertificate minimal_certificate(std::span<const double> quality, double alpha_step) {
  if (!(alpha_step > 0.0)) throw ConfigError("alpha grid step must be positive");
  const int m = static_cast<int>(quality.size());
  const int opt = unique_optimum_position(quality);

  // need[i]: the largest ratio j / i over pairs (x, y) with x at distance i,
  // y at distance j > i and quality(y) >= quality(x). Any alpha at least
  // need[i] clears every x at distance i.
  std::vector<double> need(static_cast<std::size_t>(m), 1.0);
  for (int x = 1; x <= m; ++x) {
    const int i = std::abs(x - opt);
    if (i == 0) continue;
    const double qx = quality[static_cast<std::size_t>(x - 1)];
    for (int y = 1; y <= m; ++y) {
      const int j = std::abs(y - opt);
      if (j > i && quality[static_cast<std::size_t>(y - 1)] >= qx) {
        need[static_cast<std::size_t>(i)] = std::max(need[static_cast<std::size_t>(i)],
                                                     static_cast<double>(j) / i);
      }
    }
  }

  UnimodalityCertificate cert;
  cert.per_beta.resize(static_cast<std::size_t>(m));
  double suffix = 1.0;
  for (int beta = m; beta >= 1; --beta) {
    if (beta < m) suffix = std::max(suffix, need[static_cast<std::size_t>(beta)]);
    const double steps = std::ceil((suffix - 1.0) / alpha_step - kDistanceEps);
    cert.per_beta[static_cast<std::size_t>(beta - 1)] = {1.0 + std::max(0.0, steps) * alpha_step, beta};
  }
  for (const auto& p : cert.per_beta) {
    if (cert.pareto.empty() || p.alpha < cert.pareto.back().alpha) cert.pareto.push_back(p);
  }
  for (auto& p : cert.pareto) {
    // Guard against the grid value landing a rounding error below the ratio.
    while (check_approx_unimodal(quality, p.alpha, p.beta)) p.alpha += alpha_step;
  }
  return cert;
}

std::vector<SliceReport> check_slices(const Landscape& landscape, double alpha, int beta) {
  const auto& space = landscape.space();
  std::vector<SliceReport> reports;
  for (std::size_t d = 0; d < space.dimension_count(); ++d) {
    const int m = space.range(d);
    std::vector<double> slice(static_cast<std::size_t>(m));
    for (std::uint64_t k = 0; k < space.cardinality(); ++k) {
      Configuration anchor = space.at(k);
      if (anchor[d] != 1) continue;
      for (int v = 1; v <= m; ++v) {
        Configuration c = anchor;
        c[d] = v;
        slice[static_cast<std::size_t>(v - 1)] = landscape.quality(c);
      }
      SliceReport report;
      report.dimension = d;
      report.anchor = anchor;
      const double best = *std::max_element(slice.begin(), slice.end());
      report.unique_optimum = std::count(slice.begin(), slice.end(), best) == 1;
      if (report.unique_optimum) report.witness = check_approx_unimodal(slice, alpha, std::min(beta, m));
      reports.push_back(std::move(report));
    }
  }
  return reports;
}

std::string_view to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::unimodal: return "unimodal";
    case SyntheticKind::plateau: return "plateau";
    case SyntheticKind::sawtooth: return "sawtooth";
    case SyntheticKind::deceptive: return "deceptive";
  }
  return "?";
}

SyntheticKind parse_synthetic_kind(std::string_view text) {
  if (text == "unimodal") return SyntheticKind::unimodal;
  if (text == "plateau") return SyntheticKind::plateau;
  if (text == "sawtooth") return SyntheticKind::sawtooth;
  if (text == "deceptive") return SyntheticKind::deceptive;
  throw ConfigError("unknown synthetic landscape '" + std::string(text) + "'");
}

Landscape generate_synthetic(SyntheticKind kind, int m, int optimum, double sawtooth_alpha) {
  if (m < 2) throw ConfigError("synthetic landscapes need m >= 2");
  if (optimum < 1 || optimum > m) throw ConfigError("optimum must lie in 1..m");
  if (kind == SyntheticKind::sawtooth && !(sawtooth_alpha >= 1.0)) {
    throw ConfigError("sawtooth alpha must be at least 1");
  }
  // Block index of every distance for the sawtooth: [b_k, b_{k+1}).
  std::vector<int> block(static_cast<std::size_t>(m), 0), block_start(static_cast<std::size_t>(m), 0);
  if (kind == SyntheticKind::sawtooth) {
    int k = 0;
    long long lo = 1;
    long long hi = static_cast<long long>(std::floor(sawtooth_alpha * lo + kDistanceEps)) + 1;
    for (int d = 1; d < m; ++d) {
      while (d >= hi) {
        ++k;
        lo = hi;
        hi = static_cast<long long>(std::floor(sawtooth_alpha * lo + kDistanceEps)) + 1;
      }
      block[static_cast<std::size_t>(d)] = k;
      block_start[static_cast<std::size_t>(d)] = static_cast<int>(lo);
    }
  }

  std::vector<double> q(static_cast<std::size_t>(m));
  for (int x = 1; x <= m; ++x) {
    const int d = std::abs(x - optimum);
    double v = 0.0;
    switch (kind) {
      case SyntheticKind::unimodal: v = -d; break;
      case SyntheticKind::plateau: v = d == 0 ? 1.0 : 0.0; break;
      case SyntheticKind::deceptive: v = d == 0 ? m : d; break;
      case SyntheticKind::sawtooth:
        v = d == 0 ? 0.0
                   : -static_cast<double>(block[static_cast<std::size_t>(d)] + 1) * m +
                         (d - block_start[static_cast<std::size_t>(d)]);
        break;
    }
    q[static_cast<std::size_t>(x - 1)] = v;
  }
  return Landscape(ParameterSpace::line(m), std::move(q), Landscape::Kind::exact);
}

Landscape generate_synthetic(SyntheticKind kind, int m, Engine& rng, double sawtooth_alpha) {
  if (m < 2) throw ConfigError("synthetic landscapes need m >= 2");
  return generate_synthetic(kind, m, uniform_int(rng, 1, m), sawtooth_alpha);
}

namespace {

std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace

Landscape parse_cached_landscape(std::istream& in, std::size_t target_count) {
  if (target_count == 0) throw ConfigError("target count must be at least 1");
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!trim_cr(raw).empty()) {
      header = csv::split(trim_cr(raw));
      break;
    }
  }
  if (header.size() < 2 || header.back() != "quality") {
    throw ParseError("header must be '<dimension names>,quality'", std::max<std::size_t>(line_no, 1));
  }
  const std::size_t dims = header.size() - 1;

  std::map<std::vector<int>, double> cells;
  std::vector<int> max_index(dims, 0);
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim_cr(raw);
    if (line.empty()) continue;
    const auto fields = csv::split(line);
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields", line_no);
    }
    std::vector<int> idx(dims);
    double q = 0.0;
    try {
      for (std::size_t d = 0; d < dims; ++d) {
        const long long v = csv::parse_int(fields[d]);
        if (v < 1 || v > 1'000'000) throw ParseError("index out of range", line_no);
        idx[d] = static_cast<int>(v);
        max_index[d] = std::max(max_index[d], idx[d]);
      }
      q = csv::parse_double(fields.back());
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(e.what(), line_no);
    }
    if (!std::isfinite(q)) throw ParseError("quality must be finite", line_no);
    if (!cells.emplace(idx, q).second) {
      throw ParseError("duplicate cell " + Configuration(idx).to_string(), line_no);
    }
  }

  std::vector<ParameterDim> pdims;
  for (std::size_t d = 0; d < dims; ++d) {
    if (max_index[d] < 2) throw ConfigError("dimension '" + header[d] + "' needs at least 2 values");
    pdims.push_back({header[d], max_index[d], 0.0, 1.0});
  }
  ParameterSpace space(std::move(pdims));
  std::vector<double> q(space.cardinality());
  std::vector<std::string> missing;
  for (std::uint64_t k = 0; k < q.size(); ++k) {
    const Configuration c = space.at(k);
    const auto it = cells.find(c.indices());
    if (it == cells.end()) {
      missing.push_back(c.to_string());
    } else {
      q[k] = it->second;
    }
  }
  if (!missing.empty()) {
    std::string msg = "landscape is missing " + std::to_string(missing.size()) + " cell(s):";
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) msg += " " + missing[i];
    if (missing.size() > 20) msg += " ...";
    throw ConfigError(msg);
  }
  Landscape tmp(space, q, Landscape::Kind::cached);
  auto targets = tmp.top(target_count);
  return Landscape(std::move(space), std::move(q), Landscape::Kind::cached, std::move(targets));
}

Landscape load_cached_landscape(const std::string& path, std::size_t target_count) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open landscape file '" + path + "'");
  return parse_cached_landscape(in, target_count);
}

void write_cached_landscape(const Landscape& landscape, std::ostream& out) {
  const auto& space = landscape.space();
  for (const auto& d : space.dims()) out << d.name << ',';
  out << "quality\n";
  for (std::uint64_t k = 0; k < space.cardinality(); ++k) {
    const Configuration c = space.at(k);
    for (std::size_t d = 0; d < c.size(); ++d) out << c[d] << ',';
    out << csv::format_double(landscape.values()[k]) << '\n';
  }
}

void write_cached_landscape(const Landscape& landscape, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write landscape file '" + path + "'");
  write_cached_landscape(landscape, out);
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

}  // namespace ptune
