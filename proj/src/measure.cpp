#include "mixmf/measure.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "mixmf/numeric.hpp"

namespace mixmf {

namespace {

constexpr double kWeightSumTol = 1e-12;
constexpr double kGeomTol = 1e-12;
constexpr double kCdfResidualCut = 1e-15;
constexpr int kCdfDepthCap = 64;

void validate_spec(const CascadeSpec& s) {
  const std::size_t b = s.base_count;
  if (b < 2) {
    throw std::invalid_argument("build_measure: base_count must be >= 2");
  }
  if (s.ratios.size() != b || s.weights.size() != b ||
      (!s.offsets.empty() && s.offsets.size() != b)) {
    throw std::invalid_argument(
        "build_measure: ratios/offsets/weights must have base_count entries");
  }
  double ratio_sum = 0.0;
  for (double c : s.ratios) {
    if (!(c > 0.0) || c >= 1.0) {
      throw std::invalid_argument(
          "build_measure: ratios must lie strictly in (0, 1)");
    }
    ratio_sum += c;
  }
  if (ratio_sum > 1.0 + kGeomTol) {
    throw std::invalid_argument("build_measure: ratios sum exceeds 1");
  }
  double weight_sum = 0.0;
  std::size_t positive = 0;
  for (double p : s.weights) {
    if (p < 0.0) {
      throw std::invalid_argument("build_measure: negative weight");
    }
    if (p > 0.0) ++positive;
    weight_sum += p;
  }
  if (std::abs(weight_sum - 1.0) > kWeightSumTol) {
    throw std::invalid_argument("build_measure: weights must sum to 1");
  }
  if (positive < 2) {
    throw std::invalid_argument(
        "build_measure: at least two weights must be positive");
  }
  if (!s.offsets.empty()) {
    double prev_end = 0.0;
    for (std::size_t i = 0; i < b; ++i) {
      const double a = s.offsets[i];
      if (a < prev_end - kGeomTol) {
        throw std::invalid_argument(
            "build_measure: child intervals overlap or are out of order");
      }
      prev_end = a + s.ratios[i];
    }
    if (s.offsets.front() < -kGeomTol || prev_end > 1.0 + kGeomTol) {
      throw std::invalid_argument(
          "build_measure: child intervals must stay inside [0,1]");
    }
  }
}

}  // namespace

CascadeSpec CascadeSpec::uniform_binary() {
  return CascadeSpec{2, {0.5, 0.5}, {0.0, 0.5}, {0.5, 0.5}};
}

CascadeSpec CascadeSpec::binomial(double p0) {
  return CascadeSpec{2, {0.5, 0.5}, {0.0, 0.5}, {p0, 1.0 - p0}};
}

CascadeSpec CascadeSpec::cantor_uniform() { return cantor_weighted(0.5); }

CascadeSpec CascadeSpec::cantor_weighted(double p0) {
  return CascadeSpec{2, {1.0 / 3.0, 1.0 / 3.0}, {0.0, 2.0 / 3.0},
                     {p0, 1.0 - p0}};
}

SelfSimilarMeasure::SelfSimilarMeasure(CascadeSpec spec)
    : spec_(std::move(spec)) {
  if (spec_.offsets.empty() && spec_.ratios.size() == spec_.base_count) {
    // Tight packing: children laid end to end from 0.
    spec_.offsets.resize(spec_.base_count);
    double a = 0.0;
    for (std::size_t i = 0; i < spec_.base_count; ++i) {
      spec_.offsets[i] = a;
      a += spec_.ratios[i];
    }
  }
  validate_spec(spec_);
  log_weights_.resize(spec_.base_count);
  for (std::size_t i = 0; i < spec_.base_count; ++i) {
    log_weights_[i] = spec_.weights[i] > 0.0 ? std::log(spec_.weights[i])
                                             : kNegInf;
    if (spec_.weights[i] > 0.0) positive_branches_.push_back(i);
  }
}

SelfSimilarMeasure build_measure(CascadeSpec spec) {
  return SelfSimilarMeasure(std::move(spec));
}

double SelfSimilarMeasure::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const std::size_t b = spec_.base_count;
  double acc = 0.0;
  double scale = 1.0;  // mass of the cell currently descended into
  double cur = x;      // position within that cell, rescaled to [0,1]
  for (int depth = 0; depth < kCdfDepthCap; ++depth) {
    std::ptrdiff_t straddle = -1;
    for (std::size_t i = 0; i < b; ++i) {
      const double a = spec_.offsets[i];
      if (a >= cur) break;  // children are ordered left to right
      if (a + spec_.ratios[i] <= cur) {
        acc += scale * spec_.weights[i];
      } else {
        straddle = static_cast<std::ptrdiff_t>(i);
        break;
      }
    }
    if (straddle < 0) return acc;  // cur sits in a gap or past all children
    const auto i = static_cast<std::size_t>(straddle);
    scale *= spec_.weights[i];
    if (scale < kCdfResidualCut) return acc;
    cur = (cur - spec_.offsets[i]) / spec_.ratios[i];
  }
  return acc;
}

double SelfSimilarMeasure::ball_mass(double x, double r) const {
  if (!(r > 0.0)) return 0.0;
  return std::max(0.0, cdf(x + r) - cdf(x - r));
}

bool SelfSimilarMeasure::same_geometry(const SelfSimilarMeasure& other) const {
  return spec_.base_count == other.spec_.base_count &&
         spec_.ratios == other.spec_.ratios &&
         spec_.offsets == other.spec_.offsets;
}

std::vector<double> SelfSimilarMeasure::sample_support_points(
    std::size_t count, int depth, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::vector<double> pts;
  pts.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    double left = 0.0, length = 1.0;
    for (int j = 0; j < depth; ++j) {
      const std::size_t br =
          positive_branches_[rng() % positive_branches_.size()];
      left += spec_.offsets[br] * length;
      length *= spec_.ratios[br];
    }
    pts.push_back(left);
  }
  return pts;
}

CellView CellSet::view(std::size_t i) const {
  CellView v;
  v.depth = depth_;
  const std::size_t d = static_cast<std::size_t>(depth_);
  v.digits = std::span<const std::uint8_t>(digits_.data() + i * d, d);
  v.left = lefts_[i];
  v.length = lengths_[i];
  v.nu_mass = nu_masses_[i];
  v.log_nu = log_nu_[i];
  const std::size_t k = component_count_;
  v.mu_masses = std::span<const double>(mu_cellwise_.data() + i * k, k);
  v.log_mu = std::span<const double>(log_mu_cellwise_.data() + i * k, k);
  return v;
}

std::span<const double> CellSet::mu_masses(std::size_t c) const {
  return mu_masses_.at(c);
}

std::span<const double> CellSet::log_mu(std::size_t c) const {
  return log_mu_.at(c);
}

VectorMeasure::VectorMeasure(std::vector<SelfSimilarMeasure> components,
                             SelfSimilarMeasure reference)
    : components_(std::move(components)), reference_(std::move(reference)) {
  if (components_.empty()) {
    throw std::invalid_argument("VectorMeasure: needs at least one component");
  }
  for (const auto& m : components_) {
    if (!m.same_geometry(reference_)) {
      throw std::invalid_argument(
          "VectorMeasure: all measures must share ratios and offsets");
    }
  }
  for (std::size_t i = 0; i < reference_.base_count(); ++i) {
    bool in_all = reference_.weights()[i] > 0.0;
    for (const auto& m : components_) {
      in_all = in_all && m.weights()[i] > 0.0;
    }
    if (in_all) included_.push_back(i);
  }
  if (included_.size() < 2) {
    throw std::invalid_argument(
        "VectorMeasure: fewer than two branches carry mass in every measure");
  }
}

CellSet VectorMeasure::cells_at_depth(int depth) const {
  if (depth < 0) {
    throw std::invalid_argument("cells_at_depth: negative depth");
  }
  const double b = static_cast<double>(base_count());
  if (static_cast<double>(depth) * std::log2(b) > 40.0 + 1e-9) {
    throw std::length_error(
        "cells_at_depth: enumeration would exceed the 2^40 cell guard; "
        "reduce the depth or use descent-based queries");
  }
  const std::size_t k = components_.size();
  CellSet out;
  out.depth_ = depth;
  out.component_count_ = k;
  out.mu_masses_.resize(k);
  out.log_mu_.resize(k);

  const auto& ratios = this->ratios();
  const auto& offsets = this->offsets();

  // Depth-first over included branches, lexicographic digit order.
  struct Frame {
    double left, length, nu_mass, log_nu;
    std::vector<double> mu_mass, log_mu;
  };
  std::vector<std::uint8_t> word(static_cast<std::size_t>(depth), 0);
  std::vector<Frame> stack(static_cast<std::size_t>(depth) + 1);
  stack[0] = Frame{0.0, 1.0, 1.0, 0.0, std::vector<double>(k, 1.0),
                   std::vector<double>(k, 0.0)};

  double max_diam = 0.0;
  // Iterative enumeration: idx[j] walks included_ at level j.
  std::vector<std::size_t> idx(static_cast<std::size_t>(depth) + 1, 0);
  int level = 0;
  if (depth == 0) {
    max_diam = 1.0;
    out.lefts_.push_back(0.0);
    out.lengths_.push_back(1.0);
    out.nu_masses_.push_back(1.0);
    out.log_nu_.push_back(0.0);
    for (std::size_t c = 0; c < k; ++c) {
      out.mu_masses_[c].push_back(1.0);
      out.log_mu_[c].push_back(0.0);
      out.mu_cellwise_.push_back(1.0);
      out.log_mu_cellwise_.push_back(0.0);
    }
    out.max_diameter_ = max_diam;
    return out;
  }
  while (level >= 0) {
    if (idx[static_cast<std::size_t>(level)] >= included_.size()) {
      idx[static_cast<std::size_t>(level)] = 0;
      --level;
      if (level >= 0) ++idx[static_cast<std::size_t>(level)];
      continue;
    }
    const std::size_t branch =
        included_[idx[static_cast<std::size_t>(level)]];
    const auto lvl = static_cast<std::size_t>(level);
    const Frame& parent = stack[lvl];
    Frame child;
    child.left = parent.left + offsets[branch] * parent.length;
    child.length = parent.length * ratios[branch];
    child.nu_mass = parent.nu_mass * reference_.weights()[branch];
    child.log_nu = parent.log_nu + reference_.log_weights()[branch];
    child.mu_mass.resize(k);
    child.log_mu.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
      child.mu_mass[c] = parent.mu_mass[c] * components_[c].weights()[branch];
      child.log_mu[c] =
          parent.log_mu[c] + components_[c].log_weights()[branch];
    }
    word[lvl] = static_cast<std::uint8_t>(branch);
    if (level + 1 == depth) {
      out.digits_.insert(out.digits_.end(), word.begin(), word.end());
      out.lefts_.push_back(child.left);
      out.lengths_.push_back(child.length);
      out.nu_masses_.push_back(child.nu_mass);
      out.log_nu_.push_back(child.log_nu);
      for (std::size_t c = 0; c < k; ++c) {
        out.mu_masses_[c].push_back(child.mu_mass[c]);
        out.log_mu_[c].push_back(child.log_mu[c]);
        out.mu_cellwise_.push_back(child.mu_mass[c]);
        out.log_mu_cellwise_.push_back(child.log_mu[c]);
      }
      max_diam = std::max(max_diam, child.length);
      ++idx[lvl];
    } else {
      stack[lvl + 1] = std::move(child);
      ++level;
    }
  }
  out.max_diameter_ = max_diam;
  return out;
}

std::vector<double> VectorMeasure::sample_support_points(
    std::size_t count, int depth, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::vector<double> pts;
  pts.reserve(count);
  const auto& ratios = this->ratios();
  const auto& offsets = this->offsets();
  for (std::size_t s = 0; s < count; ++s) {
    double left = 0.0, length = 1.0;
    for (int j = 0; j < depth; ++j) {
      // Plain modulo keeps the stream identical across standard libraries.
      const std::size_t br = included_[rng() % included_.size()];
      left += offsets[br] * length;
      length *= ratios[br];
    }
    // Left endpoints stay inside the attractor even when the construction
    // has gaps; midpoints do not.
    pts.push_back(left);
  }
  return pts;
}

CellSet cells_at_depth(const VectorMeasure& vm, int depth) {
  return vm.cells_at_depth(depth);
}

CellLocation locate_cell(const VectorMeasure& vm, double x, int depth) {
  if (x < 0.0 || x > 1.0) {
    throw std::domain_error("locate_cell: x outside [0,1]");
  }
  const std::size_t k = vm.component_count();
  const auto& ratios = vm.ratios();
  const auto& offsets = vm.offsets();
  const auto& included = vm.included_branches();

  CellLocation loc;
  loc.digits.reserve(static_cast<std::size_t>(depth));
  loc.log_mu.assign(k, 0.0);
  double cur = x;  // position rescaled to the current cell
  for (int level = 0; level < depth; ++level) {
    std::ptrdiff_t hit = -1;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      const double a = offsets[i];
      // Half-open cells; the final branch keeps its right endpoint so
      // x = 1 stays locatable on tight packings.
      const bool last = i + 1 == ratios.size();
      if (cur >= a && (cur < a + ratios[i] ||
                       (last && cur <= a + ratios[i]))) {
        hit = static_cast<std::ptrdiff_t>(i);
        break;
      }
    }
    if (hit < 0) {
      throw std::domain_error(
          "locate_cell: x lies in a construction gap at depth " +
          std::to_string(level + 1));
    }
    const auto br = static_cast<std::size_t>(hit);
    if (std::find(included.begin(), included.end(), br) == included.end()) {
      throw std::domain_error(
          "locate_cell: x leaves the common support at depth " +
          std::to_string(level + 1));
    }
    loc.digits.push_back(static_cast<std::uint8_t>(br));
    loc.left += offsets[br] * loc.length;
    loc.length *= ratios[br];
    loc.log_nu += vm.reference().log_weights()[br];
    for (std::size_t c = 0; c < k; ++c) {
      loc.log_mu[c] += vm.component(c).log_weights()[br];
    }
    cur = (cur - offsets[br]) / ratios[br];
  }
  return loc;
}

}  // namespace mixmf
