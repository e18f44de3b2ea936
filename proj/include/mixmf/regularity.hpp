#pragma once

// Quasi-Ahlfors index estimation for a self-similar measure, doubling
// constants over sampled balls, and the doubling-class membership test
// for vector-valued measures.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mixmf/measure.hpp"

namespace mixmf {

enum class RegularityVerdict {
  exact_ahlfors,      // nu(C) = |C|^alpha on every cell
  quasi_ahlfors,      // cell ratios nu(C)/|C|^alpha stay bounded
  not_at_this_alpha,  // ratios diverge with depth
};

struct RegularityReport {
  double alpha_hat = 0.0;  // critical index min_i log(1/p_i)/log(1/c_i)
  double alpha_used = 0.0;  // index the scan ran at
  double M_hat = 0.0;       // max observed cell ratio (>= 1: depth 0 is 1)
  // (depth, max over depth-n cells of nu(C)/|C|^alpha_used).
  std::vector<std::pair<int, double>> per_depth;
  RegularityVerdict verdict = RegularityVerdict::not_at_this_alpha;
};

// Scan at a caller-chosen index; bounded/diverging decided from the trend
// of the last few per-depth maxima.
RegularityReport quasi_ahlfors_scan(const SelfSimilarMeasure& nu, double alpha,
                                    std::span<const int> depths);

// Scan at the critical index alpha_hat itself.
RegularityReport quasi_ahlfors_index(const SelfSimilarMeasure& nu,
                                     std::span<const int> depths);

struct DoublingReport {
  double a = 0.0;
  // (depth, sup over sampled x of m(B(x, a r))/m(B(x, r)) at r = b^-depth).
  std::vector<std::pair<int, double>> per_depth_sup;
  double P_a_hat = 0.0;  // max over the last 3 depths
  std::size_t points_skipped = 0;  // zero inner ball mass
  bool finite = false;
};

DoublingReport doubling_constant(const SelfSimilarMeasure& m, double a,
                                 std::span<const int> depths,
                                 std::size_t samples,
                                 std::uint64_t seed = 0x5eed);

struct VectorDoublingReport {
  double a = 0.0;
  std::vector<DoublingReport> components;
  DoublingReport reference;
  double product = 0.0;  // product of component P_a_hat values
  bool in_P_D = false;   // every component's P_a_hat finite
  bool reference_finite = false;
};

// Component-wise doubling constants plus their product. The membership
// verdict covers the components; the reference's own report is attached
// since the dimension statements assume a doubling reference too.
VectorDoublingReport is_doubling(const VectorMeasure& vm, double a,
                                 std::span<const int> depths,
                                 std::size_t samples,
                                 std::uint64_t seed = 0x5eed);

}  // namespace mixmf
