#pragma once

// Pointwise (q,t)-densities of a measure theta against the mixed kernel,
// grid-realized density classification of the unit-density sets, and the
// two-sided pre-measure sandwich check.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mixmf/kernel.hpp"
#include "mixmf/measure.hpp"

namespace mixmf {

// Geometric radius schedule r_j = r0 * rho^j, j = 0..steps-1. The first
// half of the schedule is treated as transient; extremes are taken over
// the tail half.
struct RadiusSchedule {
  double r0 = 0.25;
  double rho = 0.5;
  std::size_t steps = 40;

  std::vector<double> radii() const;
};

struct DensityEstimate {
  double x = 0.0;
  double lower = 0.0;  // min ratio over the schedule tail
  double upper = 0.0;  // max ratio over the schedule tail
  RadiusSchedule schedule;
  std::vector<std::pair<double, double>> ratio_trace;  // (r, ratio)
};

// Ratio theta(B(x,r)) / gamma(B(x,r)) along the schedule, with exact ball
// masses. Throws std::domain_error naming the measure whose ball mass
// vanished when x is outside the common support.
DensityEstimate density_at(double x, const SelfSimilarMeasure& theta,
                           const VectorMeasure& vm, const KernelParams& params,
                           const RadiusSchedule& schedule = {});

// Sum of gamma over depth-`level` cells contained in [lo, hi]. Cells that
// straddle an endpoint of [lo, hi] are dropped (inner pre-measure). Exact
// for cell-aligned intervals; log-space throughout.
GammaResult premeasure_level_mass(const VectorMeasure& vm,
                                  const KernelParams& params, double lo,
                                  double hi, int level);

struct PointClassification {
  double x = 0.0;
  // Extremes of the realized-density ratio over the depth sweep's tail:
  // d_* from the covering reading, delta_* from the packing reading.
  // Grid cells are simultaneously a covering and a packing, so the pairs
  // coincide; both are reported to keep the four set memberships explicit.
  double d_upper = 0.0;
  double d_lower = 0.0;
  double delta_upper = 0.0;
  double delta_lower = 0.0;
  bool in_K_upper = false;  // |d_upper - 1| within band
  bool in_K_lower = false;
  bool in_T_upper = false;
  bool in_T_lower = false;
  bool in_K = false;  // in_K_upper && in_K_lower
  bool in_T = false;
  std::vector<std::pair<int, double>> ratio_trace;  // (depth, ratio)
};

// Grid-realized density classification at (q, t). The ball is the
// depth-depths.front() cell containing x; the comparison measure is the
// depth-n kernel pre-measure swept over the remaining depths. At the
// cutoff t the ratio is depth-stable near 1; above it the ratio decays.
PointClassification classify_point(const VectorMeasure& vm, double x,
                                   const KernelParams& params,
                                   std::span<const int> depths,
                                   double band = 0.05);

struct SandwichReport {
  double theta_total = 0.0;  // theta mass of the depth-d support covering
  double h_hat = 0.0;        // grid pre-measure (covering sum) at depth d
  double p_hat = 0.0;        // packing sum; equals h_hat on the grid
  double inf_upper = 0.0;    // extremes of sampled upper densities
  double sup_upper = 0.0;
  double inf_lower = 0.0;    // extremes of sampled lower densities
  double sup_lower = 0.0;
  bool hausdorff_ok = false;  // h_hat*inf_upper <= theta <= h_hat*sup_upper
  bool packing_ok = false;    // p_hat*inf_lower <= theta <= p_hat*sup_lower
  bool non_informative = false;  // pre-measure collapsed or densities blew up
  std::size_t points_used = 0;
  std::size_t points_skipped = 0;
  std::uint64_t seed = 0;
};

// Two-sided check theta(E) against pre-measure times density extremes,
// sampled over in-support points, with a 5% slack factor on each side.
// Requires theta on the same geometry and at least 8 sample points.
SandwichReport sandwich_check(const SelfSimilarMeasure& theta,
                              const VectorMeasure& vm,
                              const KernelParams& params, int depth,
                              std::size_t sample_points,
                              std::uint64_t seed = 0x5eed,
                              const RadiusSchedule& schedule = {});

}  // namespace mixmf
