#pragma once

// End-to-end numerical checks: the Billingsley-type dimension relation
// between the mixed and classical cutoffs, and the unit-density-set
// dimension claim verified by classify-and-re-estimate.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mixmf/dimension.hpp"
#include "mixmf/measure.hpp"

namespace mixmf {

enum class TheoremVerdict { pass, fail, non_informative };

struct TheoremReport {
  std::string theorem_id;
  std::string inputs;  // short human-readable input descriptor
  std::vector<std::pair<std::string, double>> quantities;
  TheoremVerdict verdict = TheoremVerdict::non_informative;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  std::string note;  // interpretation choices spelled out
};

enum class BillingsleyMode {
  equality,    // requires an exactly Ahlfors-regular reference
  inequality,  // two-sided bound with positive/negative parts
  automatic,   // equality when the reference is exact, else inequality
};

// For each scalar q: the classical cutoff (diameter kernel) against alpha
// times the mixed cutoff (reference-mass kernel). Equality asserted to
// 1e-6 for an exact-Ahlfors reference; otherwise the two-sided bound
// (dim)_- <= alpha * dim_mixed <= (dim)_+ with (x)_- = min(x,0) and
// (x)_+ = max(x,0).
TheoremReport verify_billingsley(const VectorMeasure& mu_vm,
                                 const SelfSimilarMeasure& nu,
                                 std::span<const double> q_grid,
                                 std::span<const int> depths,
                                 BillingsleyMode mode =
                                     BillingsleyMode::automatic);

struct DensitySetOptions {
  std::size_t samples = 256;
  std::uint64_t seed = 0x5eed;
  double min_fraction = 0.95;  // classified fraction demanded for a pass
  double dim_tolerance = 0.02;  // |re-estimated t - t| demanded for a pass
  double band = 0.05;           // density membership band
  std::optional<double> t_override;  // probe an off-cutoff t
};

// Classifies sampled support points at the cutoff (or the override),
// reports the fractions landing in the unit-density sets, and re-runs the
// cutoff restricted to the covering cells of the classified points.
TheoremReport verify_dimension_of_density_sets(
    const VectorMeasure& vm, std::span<const double> q,
    std::span<const int> depths, const DensitySetOptions& opts = {});

}  // namespace mixmf
