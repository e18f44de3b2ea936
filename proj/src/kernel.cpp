#include "mixmf/kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mixmf/numeric.hpp"

namespace mixmf {

namespace {

constexpr double kParamBound = 64.0;
constexpr double kValueFloor = 1e-300;

// exp() with saturation flags instead of silent under/overflow.
void exp_saturating(double log_value, double& value, bool& over, bool& under) {
  static const double log_max = std::log(std::numeric_limits<double>::max());
  static const double log_floor = std::log(kValueFloor);
  over = false;
  under = false;
  if (log_value == kNegInf) {
    value = 0.0;
    return;
  }
  if (log_value > log_max) {
    value = kPosInf;
    over = true;
    return;
  }
  if (log_value < log_floor) {
    value = kValueFloor;
    under = true;
    return;
  }
  value = std::exp(log_value);
}

}  // namespace

void validate_params(const KernelParams& params, std::size_t expected_k) {
  if (params.q.size() != expected_k) {
    throw std::invalid_argument(
        "validate_params: q must have one entry per component");
  }
  for (double qi : params.q) {
    if (!std::isfinite(qi) || std::abs(qi) > kParamBound) {
      throw std::invalid_argument("validate_params: q entries must be finite "
                                  "with |q_i| <= 64");
    }
  }
  if (!std::isfinite(params.t) || std::abs(params.t) > kParamBound) {
    throw std::invalid_argument(
        "validate_params: t must be finite with |t| <= 64");
  }
}

GammaResult from_log(double log_value) {
  GammaResult out;
  out.log_value = log_value;
  exp_saturating(log_value, out.value, out.overflowed, out.underflowed);
  return out;
}

double log_gamma(std::span<const double> q, double t,
                 std::span<const double> log_mu, double log_ref) {
  CompensatedSum acc;
  for (std::size_t j = 0; j < q.size(); ++j) {
    acc.add(q[j] * log_mu[j]);
  }
  acc.add(t * log_ref);
  return acc.value();
}

GammaResult gamma(const KernelParams& params,
                  std::span<const double> mu_masses, double nu_mass) {
  validate_params(params, mu_masses.size());
  for (double m : mu_masses) {
    if (!(m > 0.0)) {
      throw std::invalid_argument("gamma: nonpositive component mass");
    }
  }
  if (!(nu_mass > 0.0)) {
    throw std::invalid_argument("gamma: nonpositive reference mass");
  }
  CompensatedSum acc;
  for (std::size_t j = 0; j < params.q.size(); ++j) {
    acc.add(params.q[j] * std::log(mu_masses[j]));
  }
  acc.add(params.t * std::log(nu_mass));
  GammaResult out;
  out.log_value = acc.value();
  exp_saturating(out.log_value, out.value, out.overflowed, out.underflowed);
  return out;
}

KernelTable::KernelTable(const CellSet& cells, std::span<const double> q,
                         RefKind ref)
    : depth_(cells.depth()) {
  if (q.size() != cells.component_count()) {
    throw std::invalid_argument(
        "KernelTable: q must have one entry per component");
  }
  const std::size_t n = cells.size();
  base_.resize(n);
  log_ref_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    CellView v = cells.view(i);
    CompensatedSum acc;
    for (std::size_t j = 0; j < q.size(); ++j) {
      acc.add(q[j] * v.log_mu[j]);
    }
    base_[i] = acc.value();
    log_ref_[i] = ref == RefKind::nu_mass ? v.log_nu : std::log(v.length);
  }
}

double KernelTable::log_sum(double t) const {
  const std::size_t n = base_.size();
  if (n == 0) return kNegInf;
  double m = kNegInf;
  for (std::size_t i = 0; i < n; ++i) {
    m = std::max(m, base_[i] + t * log_ref_[i]);
  }
  if (m == kNegInf) return kNegInf;
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    acc.add(std::exp(base_[i] + t * log_ref_[i] - m));
  }
  return m + std::log(acc.value());
}

PartitionSum partition_sum(const CellSet& cells, const KernelParams& params,
                           SumKind kind, RefKind ref) {
  validate_params(params, cells.component_count());
  KernelTable table(cells, params.q, ref);
  PartitionSum out;
  out.depth = cells.depth();
  out.kind = kind;
  out.cell_count = cells.size();
  out.log_value = table.log_sum(params.t);
  exp_saturating(out.log_value, out.value, out.overflowed, out.underflowed);
  return out;
}

PartitionSum partition_sum(const VectorMeasure& vm, const KernelParams& params,
                           int depth, SumKind kind, RefKind ref) {
  return partition_sum(vm.cells_at_depth(depth), params, kind, ref);
}

}  // namespace mixmf
