#include "mixmf/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mixmf/numeric.hpp"

namespace mixmf {

namespace {

constexpr double kExactTol = 1e-12;
constexpr double kTrendSlack = 1.1;  // bounded = last 5 maxima within 10%

void check_depths(std::span<const int> depths, const char* fn) {
  if (depths.empty()) {
    throw std::invalid_argument(std::string(fn) + ": depths must be "
                                "non-empty");
  }
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (depths[i] < 1 || (i > 0 && depths[i] <= depths[i - 1])) {
      throw std::invalid_argument(std::string(fn) + ": depths must be "
                                  "strictly increasing and >= 1");
    }
  }
}

}  // namespace

RegularityReport quasi_ahlfors_scan(const SelfSimilarMeasure& nu, double alpha,
                                    std::span<const int> depths) {
  check_depths(depths, "quasi_ahlfors_scan");
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("quasi_ahlfors_scan: alpha must be positive");
  }

  RegularityReport rep;
  rep.alpha_used = alpha;

  // Critical index, and the largest per-digit cell ratio p_i / c_i^alpha.
  // Cell masses factor over digits, so the depth-n maximum is the n-th
  // power of the per-digit maximum, exactly.
  double alpha_hat = kPosInf;
  double log_base = kNegInf;
  bool exact = true;
  for (std::size_t i : nu.positive_branches()) {
    const double lp = std::log(nu.weights()[i]);
    const double lc = std::log(nu.ratios()[i]);
    alpha_hat = std::min(alpha_hat, lp / lc);
    log_base = std::max(log_base, lp - alpha * lc);
    exact = exact &&
            std::abs(nu.weights()[i] - std::pow(nu.ratios()[i], alpha)) <=
                kExactTol;
  }
  rep.alpha_hat = alpha_hat;

  rep.M_hat = 1.0;  // depth-0 cell ratio
  for (int d : depths) {
    const double v = std::exp(static_cast<double>(d) * log_base);
    rep.per_depth.emplace_back(d, v);
    rep.M_hat = std::max(rep.M_hat, v);
  }

  const std::size_t n = rep.per_depth.size();
  const std::size_t first = n > 5 ? n - 5 : 0;
  const bool bounded =
      rep.per_depth.back().second <=
      kTrendSlack * std::max(1.0, rep.per_depth[first].second);
  if (!bounded) {
    rep.verdict = RegularityVerdict::not_at_this_alpha;
  } else if (exact) {
    rep.verdict = RegularityVerdict::exact_ahlfors;
  } else {
    rep.verdict = RegularityVerdict::quasi_ahlfors;
  }
  return rep;
}

RegularityReport quasi_ahlfors_index(const SelfSimilarMeasure& nu,
                                     std::span<const int> depths) {
  check_depths(depths, "quasi_ahlfors_index");
  double alpha_hat = kPosInf;
  for (std::size_t i : nu.positive_branches()) {
    alpha_hat = std::min(alpha_hat, std::log(nu.weights()[i]) /
                                        std::log(nu.ratios()[i]));
  }
  return quasi_ahlfors_scan(nu, alpha_hat, depths);
}

DoublingReport doubling_constant(const SelfSimilarMeasure& m, double a,
                                 std::span<const int> depths,
                                 std::size_t samples, std::uint64_t seed) {
  check_depths(depths, "doubling_constant");
  if (!(a > 1.0)) {
    throw std::invalid_argument("doubling_constant: a must exceed 1");
  }
  if (samples < 64) {
    throw std::invalid_argument(
        "doubling_constant: need at least 64 sample points");
  }

  DoublingReport rep;
  rep.a = a;
  const std::vector<double> pts = m.sample_support_points(samples, 20, seed);
  const double b = static_cast<double>(m.base_count());

  for (int d : depths) {
    const double r = std::pow(b, -static_cast<double>(d));
    double sup = 0.0;
    for (double x : pts) {
      const double inner = m.ball_mass(x, r);
      if (!(inner > 0.0)) {
        ++rep.points_skipped;
        continue;
      }
      sup = std::max(sup, m.ball_mass(x, a * r) / inner);
    }
    rep.per_depth_sup.emplace_back(d, sup);
  }

  const std::size_t n = rep.per_depth_sup.size();
  const std::size_t first = n > 3 ? n - 3 : 0;
  rep.P_a_hat = 0.0;
  for (std::size_t i = first; i < n; ++i) {
    rep.P_a_hat = std::max(rep.P_a_hat, rep.per_depth_sup[i].second);
  }
  rep.finite = std::isfinite(rep.P_a_hat);
  return rep;
}

VectorDoublingReport is_doubling(const VectorMeasure& vm, double a,
                                 std::span<const int> depths,
                                 std::size_t samples, std::uint64_t seed) {
  VectorDoublingReport rep;
  rep.a = a;
  rep.product = 1.0;
  rep.in_P_D = true;
  for (std::size_t i = 0; i < vm.component_count(); ++i) {
    rep.components.push_back(
        doubling_constant(vm.component(i), a, depths, samples, seed));
    rep.product *= rep.components.back().P_a_hat;
    rep.in_P_D = rep.in_P_D && rep.components.back().finite;
  }
  rep.reference = doubling_constant(vm.reference(), a, depths, samples, seed);
  rep.reference_finite = rep.reference.finite;
  return rep;
}

}  // namespace mixmf
