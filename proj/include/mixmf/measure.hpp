#pragma once

// Self-similar (Moran/cascade) probability measures on [0,1] with exact
// CDF and ball-mass queries, construction-cell enumeration, and assembly
// of several components sharing one geometry into a vector-valued measure.

#include <cstdint>
#include <span>
#include <vector>

namespace mixmf {

// One generation of a Moran construction: base_count children, each a copy
// of [0,1] scaled by ratios[i], placed at offsets[i], carrying weights[i]
// of the mass. Gaps between children are allowed. An empty offsets vector
// means tight packing (cumulative ratios, no gaps).
struct CascadeSpec {
  std::size_t base_count = 0;
  std::vector<double> ratios;
  std::vector<double> offsets;
  std::vector<double> weights;

  // Lebesgue measure on [0,1].
  static CascadeSpec uniform_binary();
  // Binary cascade with equal halves and weights (p0, 1-p0).
  static CascadeSpec binomial(double p0);
  // Uniform measure on the middle-thirds Cantor set.
  static CascadeSpec cantor_uniform();
  // Cantor-set geometry (ratios 1/3, middle gap) with weights (p0, 1-p0).
  static CascadeSpec cantor_weighted(double p0);
};

class SelfSimilarMeasure {
 public:
  explicit SelfSimilarMeasure(CascadeSpec spec);

  // m([0, x]). Total function: 0 for x <= 0, 1 for x >= 1.
  double cdf(double x) const;

  // m(B(x, r)) = cdf(x + r) - cdf(x - r). Nonpositive r yields 0.
  double ball_mass(double x, double r) const;

  std::size_t base_count() const { return spec_.base_count; }
  const std::vector<double>& ratios() const { return spec_.ratios; }
  const std::vector<double>& offsets() const { return spec_.offsets; }
  const std::vector<double>& weights() const { return spec_.weights; }
  std::span<const double> log_weights() const { return log_weights_; }

  // Branch indices with strictly positive weight.
  const std::vector<std::size_t>& positive_branches() const {
    return positive_branches_;
  }

  bool same_geometry(const SelfSimilarMeasure& other) const;

  // Deterministic in-support sample: left endpoints of random
  // positive-branch cells at the given depth.
  std::vector<double> sample_support_points(std::size_t count, int depth,
                                            std::uint64_t seed) const;

 private:
  CascadeSpec spec_;
  std::vector<double> log_weights_;
  std::vector<std::size_t> positive_branches_;
};

// Validates the spec and constructs the measure. Rejects overlapping or
// escaping children, bad weight sums, and fewer than two positive weights.
SelfSimilarMeasure build_measure(CascadeSpec spec);

// A construction cell: digit word over {0..b-1} and the interval it maps to.
struct Cell {
  int depth = 0;
  std::vector<std::uint8_t> digits;
  double left = 0.0;
  double length = 1.0;
};

// Borrowed view of one enumerated cell.
struct CellView {
  int depth = 0;
  std::span<const std::uint8_t> digits;
  double left = 0.0;
  double length = 0.0;   // equals the diameter
  double nu_mass = 0.0;
  double log_nu = 0.0;
  std::span<const double> mu_masses;  // one entry per component
  std::span<const double> log_mu;
};

// Depth-n cells with strictly positive mass in every component and in the
// reference. Stored as parallel arrays; cells appear in increasing order
// of left endpoint.
class CellSet {
 public:
  std::size_t size() const { return lefts_.size(); }
  int depth() const { return depth_; }
  std::size_t component_count() const { return component_count_; }
  // Max cell diameter at this depth: the delta of the grid covering.
  double max_diameter() const { return max_diameter_; }

  CellView view(std::size_t i) const;

  std::span<const double> lefts() const { return lefts_; }
  std::span<const double> lengths() const { return lengths_; }
  std::span<const double> nu_masses() const { return nu_masses_; }
  std::span<const double> log_nu() const { return log_nu_; }
  // Component c masses / log-masses across all cells.
  std::span<const double> mu_masses(std::size_t c) const;
  std::span<const double> log_mu(std::size_t c) const;

 private:
  friend class VectorMeasure;
  int depth_ = 0;
  std::size_t component_count_ = 0;
  double max_diameter_ = 0.0;
  std::vector<std::uint8_t> digits_;  // size() * depth, row-major
  std::vector<double> lefts_;
  std::vector<double> lengths_;
  std::vector<double> nu_masses_;
  std::vector<double> log_nu_;
  std::vector<std::vector<double>> mu_masses_;  // [component][cell]
  std::vector<std::vector<double>> log_mu_;
  std::vector<double> mu_cellwise_;   // size() * k, row-major per cell
  std::vector<double> log_mu_cellwise_;
};

// k component measures plus one reference measure, all on one geometry
// (identical ratios and offsets; weights may differ).
class VectorMeasure {
 public:
  VectorMeasure(std::vector<SelfSimilarMeasure> components,
                SelfSimilarMeasure reference);

  std::size_t component_count() const { return components_.size(); }
  const SelfSimilarMeasure& component(std::size_t i) const {
    return components_[i];
  }
  const SelfSimilarMeasure& reference() const { return reference_; }

  std::size_t base_count() const { return reference_.base_count(); }
  const std::vector<double>& ratios() const { return reference_.ratios(); }
  const std::vector<double>& offsets() const { return reference_.offsets(); }

  // Branches with positive weight in every component and the reference.
  // Only these carry cells; centres of enumerated cells lie in the common
  // support.
  const std::vector<std::size_t>& included_branches() const {
    return included_;
  }

  // Enumerates depth-n cells. Guard: n * log2(base_count) <= 40.
  CellSet cells_at_depth(int depth) const;

  // Deterministic in-support sample: left endpoints of random
  // included-branch cells at the given depth. Left endpoints belong to
  // the attractor even for constructions with gaps.
  std::vector<double> sample_support_points(std::size_t count, int depth,
                                            std::uint64_t seed) const;

 private:
  std::vector<SelfSimilarMeasure> components_;
  SelfSimilarMeasure reference_;
  std::vector<std::size_t> included_;
};

CellSet cells_at_depth(const VectorMeasure& vm, int depth);

// The depth-n construction cell containing x, with its accumulated log
// masses. Throws std::domain_error when x falls into a gap or into a
// branch excluded from the common support.
struct CellLocation {
  std::vector<std::uint8_t> digits;
  double left = 0.0;
  double length = 1.0;
  std::vector<double> log_mu;  // one entry per component
  double log_nu = 0.0;
};

CellLocation locate_cell(const VectorMeasure& vm, double x, int depth);

}  // namespace mixmf
