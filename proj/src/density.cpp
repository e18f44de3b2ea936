#include "mixmf/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mixmf/numeric.hpp"

namespace mixmf {

namespace {

double checked_ball_mass(const SelfSimilarMeasure& m, double x, double r,
                         const std::string& who) {
  const double v = m.ball_mass(x, r);
  if (!(v > 0.0)) {
    throw std::domain_error("density_at: " + who +
                            " ball mass vanished at x=" + std::to_string(x) +
                            ", r=" + std::to_string(r));
  }
  return v;
}

std::size_t tail_start(std::size_t n) { return n / 2; }

}  // namespace

std::vector<double> RadiusSchedule::radii() const {
  if (!(r0 > 0.0) || !(rho > 0.0) || !(rho < 1.0) || steps < 4) {
    throw std::invalid_argument(
        "RadiusSchedule: need r0 > 0, rho in (0,1), steps >= 4");
  }
  std::vector<double> rs(steps);
  double r = r0;
  for (std::size_t j = 0; j < steps; ++j) {
    rs[j] = r;
    r *= rho;
  }
  return rs;
}

DensityEstimate density_at(double x, const SelfSimilarMeasure& theta,
                           const VectorMeasure& vm, const KernelParams& params,
                           const RadiusSchedule& schedule) {
  validate_params(params, vm.component_count());
  const std::vector<double> rs = schedule.radii();
  const std::size_t k = vm.component_count();

  DensityEstimate est;
  est.x = x;
  est.schedule = schedule;
  est.ratio_trace.reserve(rs.size());

  std::vector<double> log_mu(k);
  for (double r : rs) {
    const double th = checked_ball_mass(theta, x, r, "theta");
    for (std::size_t j = 0; j < k; ++j) {
      const double m = checked_ball_mass(vm.component(j), x, r,
                                         "component " + std::to_string(j));
      log_mu[j] = std::log(m);
    }
    const double nu = checked_ball_mass(vm.reference(), x, r, "reference");
    const double lg =
        log_gamma(params.q, params.t, log_mu, std::log(nu));
    const double ratio = from_log(std::log(th) - lg).value;
    est.ratio_trace.emplace_back(r, ratio);
  }

  const std::size_t start = tail_start(rs.size());
  est.lower = kPosInf;
  est.upper = 0.0;
  for (std::size_t j = start; j < rs.size(); ++j) {
    est.lower = std::min(est.lower, est.ratio_trace[j].second);
    est.upper = std::max(est.upper, est.ratio_trace[j].second);
  }
  return est;
}

GammaResult premeasure_level_mass(const VectorMeasure& vm,
                                  const KernelParams& params, double lo,
                                  double hi, int level) {
  validate_params(params, vm.component_count());
  if (!(hi > lo)) {
    throw std::invalid_argument("premeasure_level_mass: empty interval");
  }
  if (level < 0) {
    throw std::invalid_argument("premeasure_level_mass: negative level");
  }
  const double log_s1 =
      partition_sum(vm, params, 1, SumKind::covering).log_value;

  const auto& included = vm.included_branches();
  const auto& ratios = vm.ratios();
  const auto& offsets = vm.offsets();

  // Per-branch log increment of gamma along one descent step.
  std::vector<double> step(included.size());
  for (std::size_t n = 0; n < included.size(); ++n) {
    const std::size_t br = included[n];
    CompensatedSum acc;
    for (std::size_t j = 0; j < vm.component_count(); ++j) {
      acc.add(params.q[j] * vm.component(j).log_weights()[br]);
    }
    acc.add(params.t * vm.reference().log_weights()[br]);
    step[n] = acc.value();
  }

  // Boundary cells may differ from the query endpoints by rounding noise;
  // the tolerance is far below any gap or cell width.
  const double tol = 1e-12 * (hi - lo);
  std::vector<double> terms;

  auto descend = [&](auto&& self, int lvl, double left, double length,
                     double lg) -> void {
    if (left >= hi - tol || left + length <= lo + tol) return;
    if (left >= lo - tol && left + length <= hi + tol) {
      // Whole subtree: depth-(level-lvl) sums factor through S_1 exactly
      // for a shared geometry.
      terms.push_back(lg + static_cast<double>(level - lvl) * log_s1);
      return;
    }
    if (lvl == level) return;  // straddles an endpoint: dropped
    for (std::size_t n = 0; n < included.size(); ++n) {
      const std::size_t br = included[n];
      self(self, lvl + 1, left + offsets[br] * length, length * ratios[br],
           lg + step[n]);
    }
  };
  descend(descend, 0, 0.0, 1.0, 0.0);
  return from_log(log_sum_exp(terms));
}

PointClassification classify_point(const VectorMeasure& vm, double x,
                                   const KernelParams& params,
                                   std::span<const int> depths, double band) {
  validate_params(params, vm.component_count());
  if (depths.empty()) {
    throw std::invalid_argument("classify_point: depths must be non-empty");
  }
  for (std::size_t i = 1; i < depths.size(); ++i) {
    if (depths[i] <= depths[i - 1]) {
      throw std::invalid_argument(
          "classify_point: depths must be strictly increasing");
    }
  }
  const CellLocation loc = locate_cell(vm, x, depths.front());
  const double log_gamma_ball =
      log_gamma(params.q, params.t, loc.log_mu, loc.log_nu);

  PointClassification cls;
  cls.x = x;
  cls.ratio_trace.reserve(depths.size());
  for (int n : depths) {
    const GammaResult pm =
        premeasure_level_mass(vm, params, loc.left, loc.left + loc.length, n);
    const double ratio = from_log(pm.log_value - log_gamma_ball).value;
    cls.ratio_trace.emplace_back(n, ratio);
  }

  const std::size_t start = tail_start(depths.size());
  double lo = kPosInf, hi = 0.0;
  for (std::size_t i = start; i < cls.ratio_trace.size(); ++i) {
    lo = std::min(lo, cls.ratio_trace[i].second);
    hi = std::max(hi, cls.ratio_trace[i].second);
  }
  cls.d_upper = hi;
  cls.d_lower = lo;
  cls.delta_upper = hi;  // grid cells: covering and packing readings agree
  cls.delta_lower = lo;

  auto near_one = [band](double v) {
    return std::isfinite(v) && std::abs(v - 1.0) <= band;
  };
  cls.in_K_upper = near_one(cls.d_upper);
  cls.in_K_lower = near_one(cls.d_lower);
  cls.in_T_upper = near_one(cls.delta_upper);
  cls.in_T_lower = near_one(cls.delta_lower);
  cls.in_K = cls.in_K_upper && cls.in_K_lower;
  cls.in_T = cls.in_T_upper && cls.in_T_lower;
  return cls;
}

SandwichReport sandwich_check(const SelfSimilarMeasure& theta,
                              const VectorMeasure& vm,
                              const KernelParams& params, int depth,
                              std::size_t sample_points, std::uint64_t seed,
                              const RadiusSchedule& schedule) {
  validate_params(params, vm.component_count());
  if (sample_points < 8) {
    throw std::invalid_argument("sandwich_check: need at least 8 points");
  }
  if (!theta.same_geometry(vm.reference())) {
    throw std::invalid_argument(
        "sandwich_check: theta must share the construction geometry");
  }

  SandwichReport rep;
  rep.seed = seed;

  // theta mass of the union of depth-d support cells.
  const CellSet cells = vm.cells_at_depth(depth);
  CompensatedSum theta_acc;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    CellView v = cells.view(i);
    double m = 1.0;
    for (std::uint8_t d : v.digits) m *= theta.weights()[d];
    theta_acc.add(m);
  }
  rep.theta_total = theta_acc.value();

  rep.h_hat = partition_sum(cells, params, SumKind::covering).value;
  rep.p_hat = partition_sum(cells, params, SumKind::packing).value;

  const std::vector<double> pts = vm.sample_support_points(
      sample_points, /*depth=*/20, seed);
  rep.inf_upper = kPosInf;
  rep.sup_upper = 0.0;
  rep.inf_lower = kPosInf;
  rep.sup_lower = 0.0;
  for (double x : pts) {
    try {
      const DensityEstimate d = density_at(x, theta, vm, params, schedule);
      rep.inf_upper = std::min(rep.inf_upper, d.upper);
      rep.sup_upper = std::max(rep.sup_upper, d.upper);
      rep.inf_lower = std::min(rep.inf_lower, d.lower);
      rep.sup_lower = std::max(rep.sup_lower, d.lower);
      ++rep.points_used;
    } catch (const std::domain_error&) {
      ++rep.points_skipped;
    }
  }

  const double slack = 1.05;
  rep.hausdorff_ok = rep.points_used > 0 &&
                     rep.h_hat * rep.inf_upper <= rep.theta_total * slack &&
                     rep.theta_total <= rep.h_hat * rep.sup_upper * slack;
  rep.packing_ok = rep.points_used > 0 &&
                   rep.p_hat * rep.inf_lower <= rep.theta_total * slack &&
                   rep.theta_total <= rep.p_hat * rep.sup_lower * slack;

  // Away from the exponent that balances the comparison, the level sums
  // decay or grow geometrically and the pointwise ratios drift by orders
  // of magnitude; near it both sit within a constant of 1. An order-of-
  // magnitude band separates the regimes cleanly.
  const bool collapsed = !(rep.h_hat > 0.1) || !(rep.h_hat < 10.0);
  const bool blew_up = !std::isfinite(rep.sup_upper) ||
                       rep.sup_upper > 100.0 || rep.points_used < 8;
  rep.non_informative = collapsed || blew_up;
  return rep;
}

}  // namespace mixmf
