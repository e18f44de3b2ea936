#pragma once

// Mixed kernel gamma(B) = prod_j mu_j(B)^{q_j} * ref(B)^t evaluated in log
// space, plus grid partition sums over construction cells at a depth.

#include <cstddef>
#include <span>
#include <vector>

#include "mixmf/measure.hpp"

namespace mixmf {

struct KernelParams {
  std::vector<double> q;
  double t = 0.0;
};

// Rejects non-finite entries, |q_i| > 64 or |t| > 64 (the root-finding
// bracket), and a q length different from expected_k.
void validate_params(const KernelParams& params, std::size_t expected_k);

enum class SumKind { covering, packing };

// What the exponent t applies to: the reference measure's mass (mixed
// kernel) or the cell diameter (classical kernel, used for comparisons).
enum class RefKind { nu_mass, diameter };

struct GammaResult {
  double value = 0.0;      // +inf on overflow, floored at 1e-300 when tiny
  double log_value = 0.0;  // exact log-space result
  bool overflowed = false;
  bool underflowed = false;
};

// Packs a log-space value into a GammaResult, saturating to +inf above
// the double range and to the 1e-300 floor below it.
GammaResult from_log(double log_value);

// Kernel value for one ball or cell. Masses must be strictly positive.
GammaResult gamma(const KernelParams& params,
                  std::span<const double> mu_masses, double nu_mass);

// Same combination from precomputed logs; caller guarantees finiteness.
double log_gamma(std::span<const double> q, double t,
                 std::span<const double> log_mu, double log_ref);

struct PartitionSum {
  double value = 0.0;
  double log_value = 0.0;
  int depth = 0;
  SumKind kind = SumKind::covering;
  std::size_t cell_count = 0;
  bool overflowed = false;
  bool underflowed = false;
};

// Per-cell q-part frozen once so sweeps over t reuse one table. Grid cells
// are disjoint, so the same table serves covering and packing sums.
class KernelTable {
 public:
  KernelTable(const CellSet& cells, std::span<const double> q,
              RefKind ref = RefKind::nu_mass);

  // log of sum over cells of exp(base_i + t * log_ref_i).
  double log_sum(double t) const;

  int depth() const { return depth_; }
  std::size_t cell_count() const { return base_.size(); }

 private:
  int depth_ = 0;
  std::vector<double> base_;     // sum_j q_j * log mu_j(C_i)
  std::vector<double> log_ref_;  // log nu(C_i) or log |C_i|
};

PartitionSum partition_sum(const VectorMeasure& vm, const KernelParams& params,
                           int depth, SumKind kind = SumKind::covering,
                           RefKind ref = RefKind::nu_mass);

PartitionSum partition_sum(const CellSet& cells, const KernelParams& params,
                           SumKind kind = SumKind::covering,
                           RefKind ref = RefKind::nu_mass);

}  // namespace mixmf
