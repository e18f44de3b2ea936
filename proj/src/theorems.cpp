#include "mixmf/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "mixmf/density.hpp"
#include "mixmf/numeric.hpp"
#include "mixmf/regularity.hpp"

namespace mixmf {

namespace {

constexpr double kBillingsleyTol = 1e-6;

std::string q_label(const char* base, double q) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s(q=%g)", base, q);
  return std::string(buf);
}

}  // namespace

TheoremReport verify_billingsley(const VectorMeasure& mu_vm,
                                 const SelfSimilarMeasure& nu,
                                 std::span<const double> q_grid,
                                 std::span<const int> depths,
                                 BillingsleyMode mode) {
  if (mu_vm.component_count() != 1) {
    throw std::invalid_argument(
        "verify_billingsley: expects a single-component measure");
  }
  if (q_grid.empty()) {
    throw std::invalid_argument("verify_billingsley: empty q grid");
  }

  // Rebuild the pair with nu as the reference so both cutoffs come from
  // one shared-geometry object.
  VectorMeasure vm({mu_vm.component(0)}, nu);

  std::vector<int> reg_depths;
  for (int d : depths) reg_depths.push_back(d);
  const RegularityReport reg = quasi_ahlfors_index(nu, reg_depths);
  const double alpha = reg.alpha_hat;
  const bool exact = reg.verdict == RegularityVerdict::exact_ahlfors;

  if (mode == BillingsleyMode::equality && !exact) {
    throw std::invalid_argument(
        "verify_billingsley: equality mode needs an exactly Ahlfors-regular "
        "reference");
  }
  const bool use_equality =
      mode == BillingsleyMode::equality ||
      (mode == BillingsleyMode::automatic && exact);

  TheoremReport rep;
  rep.theorem_id = "billingsley_relation";
  rep.inputs = "k=1 cascade, alpha=" + std::to_string(alpha);
  rep.tolerance = kBillingsleyTol;
  rep.note =
      "positive/negative parts read as (x)+ = max(x,0), (x)- = min(x,0); "
      "classical cutoff uses the diameter kernel";
  rep.quantities.emplace_back("alpha", alpha);

  bool all_ok = true;
  bool informative = true;
  for (double qv : q_grid) {
    const double q[1] = {qv};
    const DimensionEstimate classical =
        cutoff_t(vm, q, DimKind::hausdorff, depths, RefKind::diameter);
    const DimensionEstimate mixed =
        cutoff_t(vm, q, DimKind::hausdorff, depths, RefKind::nu_mass);
    rep.quantities.emplace_back(q_label("dim_classical", qv),
                                classical.limit);
    rep.quantities.emplace_back(q_label("dim_mixed", qv), mixed.limit);

    if (!std::isfinite(classical.limit) || !std::isfinite(mixed.limit)) {
      informative = false;
      continue;
    }
    const double scaled = alpha * mixed.limit;
    rep.quantities.emplace_back(q_label("alpha_times_mixed", qv), scaled);
    if (use_equality) {
      all_ok = all_ok &&
               std::abs(classical.limit - scaled) <= kBillingsleyTol;
    } else {
      const double neg = std::min(classical.limit, 0.0);
      const double pos = std::max(classical.limit, 0.0);
      all_ok = all_ok && neg - kBillingsleyTol <= scaled &&
               scaled <= pos + kBillingsleyTol;
    }
  }
  rep.verdict = !informative
                    ? TheoremVerdict::non_informative
                    : (all_ok ? TheoremVerdict::pass : TheoremVerdict::fail);
  return rep;
}

TheoremReport verify_dimension_of_density_sets(const VectorMeasure& vm,
                                               std::span<const double> q,
                                               std::span<const int> depths,
                                               const DensitySetOptions& opts) {
  if (depths.size() < 2) {
    throw std::invalid_argument(
        "verify_dimension_of_density_sets: need at least two depths");
  }

  TheoremReport rep;
  rep.theorem_id = "density_set_dimension";
  rep.seed = opts.seed;
  rep.tolerance = opts.dim_tolerance;
  rep.note =
      "theta realized as the depth-n kernel pre-measure; ball held at the "
      "coarsest depth's cell";

  // Doubling hypothesis, checked cheaply and recorded.
  const int probe_depths[3] = {6, 8, 10};
  const VectorDoublingReport dbl =
      is_doubling(vm, 2.0, probe_depths, 64, opts.seed);
  rep.quantities.emplace_back("doubling_product", dbl.product);
  rep.quantities.emplace_back("doubling_in_P_D", dbl.in_P_D ? 1.0 : 0.0);

  double t_used;
  if (opts.t_override) {
    t_used = *opts.t_override;
  } else {
    const DimensionEstimate est =
        cutoff_t(vm, q, DimKind::hausdorff, depths);
    t_used = est.limit;
  }
  rep.quantities.emplace_back("t_used", t_used);
  if (!std::isfinite(t_used)) {
    rep.verdict = TheoremVerdict::non_informative;
    return rep;
  }

  KernelParams params{std::vector<double>(q.begin(), q.end()), t_used};
  const std::vector<double> pts =
      vm.sample_support_points(opts.samples, 20, opts.seed);

  const int m = depths.front();
  std::size_t n_upper = 0, n_t_lower = 0, n_failed = 0;
  std::set<std::vector<std::uint8_t>> covering;
  for (double x : pts) {
    PointClassification cls;
    try {
      cls = classify_point(vm, x, params, depths, opts.band);
    } catch (const std::domain_error&) {
      ++n_failed;
      continue;
    }
    if (cls.in_K_upper) {
      ++n_upper;
      covering.insert(locate_cell(vm, x, m).digits);
    }
    if (cls.in_T_lower) ++n_t_lower;
  }
  const double used = static_cast<double>(pts.size() - n_failed);
  const double frac_upper = used > 0 ? n_upper / used : 0.0;
  const double frac_t_lower = used > 0 ? n_t_lower / used : 0.0;
  rep.quantities.emplace_back("fraction_in_K_upper", frac_upper);
  rep.quantities.emplace_back("fraction_in_T_lower", frac_t_lower);
  rep.quantities.emplace_back("points_failed",
                              static_cast<double>(n_failed));
  rep.quantities.emplace_back("covering_cells",
                              static_cast<double>(covering.size()));

  if (covering.empty()) {
    rep.verdict = TheoremVerdict::non_informative;
    return rep;
  }

  // Cutoff restricted to the covering cells: the depth-n sum over their
  // subtrees is sum_cov gamma(C, t) * S_1(t)^{n-m}.
  const int n_deep = depths.back();
  std::vector<double> log_phi, log_nu;
  for (const auto& word : covering) {
    CompensatedSum phi;
    double lnu = 0.0;
    for (std::uint8_t d : word) {
      for (std::size_t j = 0; j < vm.component_count(); ++j) {
        phi.add(q[j] * vm.component(j).log_weights()[d]);
      }
      lnu += vm.reference().log_weights()[d];
    }
    log_phi.push_back(phi.value());
    log_nu.push_back(lnu);
  }
  const KernelTable table1(vm.cells_at_depth(1), q);
  auto g = [&](double t) {
    std::vector<double> terms(log_phi.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
      terms[i] = log_phi[i] + t * log_nu[i];
    }
    return log_sum_exp(terms) +
           static_cast<double>(n_deep - m) * table1.log_sum(t);
  };
  double re_t;
  if (g(64.0) > 0.0) {
    re_t = kPosInf;
  } else if (g(-64.0) < 0.0) {
    re_t = kNegInf;
  } else {
    re_t = bisect_decreasing(g, -64.0, 64.0, 1e-10, 200).root;
  }
  rep.quantities.emplace_back("re_estimated_t", re_t);

  const bool frac_ok = frac_upper >= opts.min_fraction &&
                       frac_t_lower >= opts.min_fraction;
  const bool dim_ok =
      std::isfinite(re_t) && std::abs(re_t - t_used) <= opts.dim_tolerance;
  rep.verdict = frac_ok && dim_ok ? TheoremVerdict::pass
                                  : TheoremVerdict::fail;
  return rep;
}

}  // namespace mixmf
