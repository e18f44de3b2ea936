#pragma once

// Cutoff exponents of grid partition sums: the t solving S_n(q,t) = 1 at
// each depth, the three kind-tagged dimension wrappers, and the Legendre
// spectrum derived from the cutoff function.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mixmf/kernel.hpp"
#include "mixmf/measure.hpp"

namespace mixmf {

enum class DimKind { hausdorff, packing, prepacking };

struct RootRecord {
  int depth = 0;
  double root = 0.0;       // +/-inf sentinel when the bracket has no root
  double residual = 0.0;   // |S_n(q, root) - 1|
  std::size_t iterations = 0;
  bool saturated = false;  // root fell outside [-64, 64]
};

struct DimensionEstimate {
  std::vector<double> q;
  DimKind kind = DimKind::hausdorff;
  std::vector<RootRecord> per_depth_roots;
  // Root at the deepest depth. Multiplicativity makes all per-depth roots
  // coincide for shared-geometry cascades, so no extrapolation is applied.
  double limit = 0.0;
  // Regression slope of ln S_n(q, t=limit) against n; near 0 when the
  // cutoff is depth-stable. NaN when the limit saturated.
  double slope_check = 0.0;
  std::optional<double> oracle;  // depth-1 closed-form root
};

// Root t of the depth-1 equation sum_i (prod_j p_{j,i}^{q_j}) w_i^t = 1
// over included branches, with w_i the reference weights (nu_mass) or the
// contraction ratios (diameter). +/-inf when the root escapes [-64, 64].
double closed_form_root(const VectorMeasure& vm, std::span<const double> q,
                        RefKind ref = RefKind::nu_mass);

// Bisection for S_n(q,t) = 1 at every requested depth, to |S-1| <= 1e-10
// within 200 iterations over t in [-64, 64].
DimensionEstimate cutoff_t(const VectorMeasure& vm, std::span<const double> q,
                           DimKind kind, std::span<const int> depths,
                           RefKind ref = RefKind::nu_mass);

// The three dimension flavors. Grid cells are disjoint, so covering and
// packing sums coincide and the three estimates agree; the kind tag keeps
// reports distinguishable. In general dim <= Dim <= Delta.
DimensionEstimate dim_q(const VectorMeasure& vm, std::span<const double> q,
                        std::span<const int> depths,
                        RefKind ref = RefKind::nu_mass);
DimensionEstimate Dim_q(const VectorMeasure& vm, std::span<const double> q,
                        std::span<const int> depths,
                        RefKind ref = RefKind::nu_mass);
DimensionEstimate Delta_q(const VectorMeasure& vm, std::span<const double> q,
                          std::span<const int> depths,
                          RefKind ref = RefKind::nu_mass);

struct SpectrumPoint {
  double q = 0.0;      // grid value of the swept component
  double tau = 0.0;    // cutoff t at this q
  double alpha = 0.0;  // -d tau / d q, central differences
  double f_alpha = 0.0;  // alpha * q + tau
  bool ok = false;       // cutoff converged without saturation
};

struct SpectrumOptions {
  // Full q template, one entry per component; the swept slot is replaced
  // by each grid value. Empty means all zeros.
  std::vector<double> frozen;
  std::size_t varying = 0;
  DimKind kind = DimKind::hausdorff;
  RefKind ref = RefKind::nu_mass;
  unsigned threads = 1;
};

// tau over a strictly increasing grid (>= 3 points), alpha by central
// differences (one-sided at the ends), f = alpha q + tau. Saturated grid
// points are skipped in the differencing and marked not ok.
std::vector<SpectrumPoint> legendre_spectrum(const VectorMeasure& vm,
                                             std::span<const double> q_grid,
                                             std::span<const int> depths,
                                             const SpectrumOptions& opts = {});

}  // namespace mixmf
