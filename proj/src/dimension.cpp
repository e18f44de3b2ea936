#include "mixmf/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "mixmf/numeric.hpp"

namespace mixmf {

namespace {

constexpr double kBracket = 64.0;
constexpr double kRootTol = 1e-10;
constexpr std::size_t kMaxIter = 200;

// Solves g(t) = 0 for strictly decreasing g = log S(t), saturating to the
// +/-inf sentinel when the bracket [-64, 64] contains no sign change.
RootRecord solve_cutoff(const KernelTable& table, double tol,
                        std::size_t max_iter) {
  RootRecord rec;
  rec.depth = table.depth();
  auto g = [&table](double t) { return table.log_sum(t); };
  const double g_hi = g(kBracket);
  if (g_hi > 0.0) {  // S(64) still above 1: root beyond the bracket
    rec.root = kPosInf;
    rec.residual = std::abs(std::expm1(g_hi));
    rec.saturated = true;
    return rec;
  }
  const double g_lo = g(-kBracket);
  if (g_lo < 0.0) {
    rec.root = kNegInf;
    rec.residual = std::abs(std::expm1(g_lo));
    rec.saturated = true;
    return rec;
  }
  BisectResult b = bisect_decreasing(g, -kBracket, kBracket, tol, max_iter);
  rec.root = b.root;
  rec.residual = b.residual;
  rec.iterations = b.iterations;
  return rec;
}

std::vector<double> branch_log_phi(const VectorMeasure& vm,
                                   std::span<const double> q) {
  const auto& included = vm.included_branches();
  std::vector<double> log_phi(included.size(), 0.0);
  for (std::size_t n = 0; n < included.size(); ++n) {
    const std::size_t i = included[n];
    CompensatedSum acc;
    for (std::size_t j = 0; j < vm.component_count(); ++j) {
      acc.add(q[j] * vm.component(j).log_weights()[i]);
    }
    log_phi[n] = acc.value();
  }
  return log_phi;
}

}  // namespace

double closed_form_root(const VectorMeasure& vm, std::span<const double> q,
                        RefKind ref) {
  if (q.size() != vm.component_count()) {
    throw std::invalid_argument(
        "closed_form_root: q must have one entry per component");
  }
  const auto& included = vm.included_branches();
  const std::vector<double> log_phi = branch_log_phi(vm, q);
  std::vector<double> log_w(included.size());
  for (std::size_t n = 0; n < included.size(); ++n) {
    const std::size_t i = included[n];
    log_w[n] = ref == RefKind::nu_mass
                   ? vm.reference().log_weights()[i]
                   : std::log(vm.ratios()[i]);
  }
  auto g = [&](double t) {
    std::vector<double> terms(log_phi.size());
    for (std::size_t n = 0; n < terms.size(); ++n) {
      terms[n] = log_phi[n] + t * log_w[n];
    }
    return log_sum_exp(terms);
  };
  if (g(kBracket) > 0.0) return kPosInf;
  if (g(-kBracket) < 0.0) return kNegInf;
  // Depth-1 sums are tiny; push the tolerance well past the bisection's.
  return bisect_decreasing(g, -kBracket, kBracket, 1e-14, 400).root;
}

DimensionEstimate cutoff_t(const VectorMeasure& vm, std::span<const double> q,
                           DimKind kind, std::span<const int> depths,
                           RefKind ref) {
  if (depths.empty()) {
    throw std::invalid_argument("cutoff_t: depths must be non-empty");
  }
  KernelParams probe{std::vector<double>(q.begin(), q.end()), 0.0};
  validate_params(probe, vm.component_count());

  DimensionEstimate est;
  est.q.assign(q.begin(), q.end());
  est.kind = kind;

  std::vector<KernelTable> tables;
  tables.reserve(depths.size());
  int deepest = depths[0];
  std::size_t deepest_pos = 0;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    tables.emplace_back(vm.cells_at_depth(depths[i]), q, ref);
    est.per_depth_roots.push_back(solve_cutoff(tables.back(), kRootTol,
                                               kMaxIter));
    if (depths[i] > deepest) {
      deepest = depths[i];
      deepest_pos = i;
    }
  }
  est.limit = est.per_depth_roots[deepest_pos].root;
  est.oracle = closed_form_root(vm, q, ref);

  if (std::isfinite(est.limit)) {
    std::vector<double> xs(depths.size()), ys(depths.size());
    for (std::size_t i = 0; i < depths.size(); ++i) {
      xs[i] = static_cast<double>(depths[i]);
      ys[i] = tables[i].log_sum(est.limit);
    }
    est.slope_check = depths.size() >= 2 ? ls_slope(xs, ys) : 0.0;
  } else {
    est.slope_check = std::numeric_limits<double>::quiet_NaN();
  }
  return est;
}

DimensionEstimate dim_q(const VectorMeasure& vm, std::span<const double> q,
                        std::span<const int> depths, RefKind ref) {
  return cutoff_t(vm, q, DimKind::hausdorff, depths, ref);
}

DimensionEstimate Dim_q(const VectorMeasure& vm, std::span<const double> q,
                        std::span<const int> depths, RefKind ref) {
  return cutoff_t(vm, q, DimKind::packing, depths, ref);
}

DimensionEstimate Delta_q(const VectorMeasure& vm, std::span<const double> q,
                          std::span<const int> depths, RefKind ref) {
  return cutoff_t(vm, q, DimKind::prepacking, depths, ref);
}

std::vector<SpectrumPoint> legendre_spectrum(const VectorMeasure& vm,
                                             std::span<const double> q_grid,
                                             std::span<const int> depths,
                                             const SpectrumOptions& opts) {
  if (q_grid.size() < 3) {
    throw std::invalid_argument(
        "legendre_spectrum: q grid needs at least 3 points");
  }
  for (std::size_t i = 1; i < q_grid.size(); ++i) {
    if (!(q_grid[i] > q_grid[i - 1])) {
      throw std::invalid_argument(
          "legendre_spectrum: q grid must be strictly increasing");
    }
  }
  const std::size_t k = vm.component_count();
  std::vector<double> tmpl = opts.frozen;
  if (tmpl.empty()) tmpl.assign(k, 0.0);
  if (tmpl.size() != k) {
    throw std::invalid_argument(
        "legendre_spectrum: frozen template must have one entry per "
        "component");
  }
  if (opts.varying >= k) {
    throw std::invalid_argument(
        "legendre_spectrum: varying index out of range");
  }

  const std::size_t npts = q_grid.size();
  std::vector<SpectrumPoint> pts(npts);

  auto eval_range = [&](std::size_t lo, std::size_t hi) {
    std::vector<double> qv = tmpl;
    for (std::size_t i = lo; i < hi; ++i) {
      qv[opts.varying] = q_grid[i];
      DimensionEstimate est = cutoff_t(vm, qv, opts.kind, depths, opts.ref);
      pts[i].q = q_grid[i];
      pts[i].tau = est.limit;
      pts[i].ok = std::isfinite(est.limit);
    }
  };

  const std::size_t want = std::max(1u, opts.threads);
  const std::size_t nthreads = std::min(want, npts);
  if (nthreads <= 1) {
    eval_range(0, npts);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (npts + nthreads - 1) / nthreads;
    for (std::size_t s = 0; s < npts; s += chunk) {
      pool.emplace_back(eval_range, s, std::min(npts, s + chunk));
    }
    for (auto& th : pool) th.join();
  }

  // alpha = -d tau / d q across the nearest usable neighbors.
  auto left_ok = [&](std::size_t i) -> std::ptrdiff_t {
    for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) - 1; j >= 0; --j) {
      if (pts[static_cast<std::size_t>(j)].ok) return j;
    }
    return -1;
  };
  auto right_ok = [&](std::size_t i) -> std::ptrdiff_t {
    for (std::size_t j = i + 1; j < npts; ++j) {
      if (pts[j].ok) return static_cast<std::ptrdiff_t>(j);
    }
    return -1;
  };
  for (std::size_t i = 0; i < npts; ++i) {
    if (!pts[i].ok) {
      pts[i].alpha = std::numeric_limits<double>::quiet_NaN();
      pts[i].f_alpha = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const std::ptrdiff_t l = left_ok(i);
    const std::ptrdiff_t r = right_ok(i);
    std::size_t a, b;
    if (l >= 0 && r >= 0) {
      a = static_cast<std::size_t>(l);
      b = static_cast<std::size_t>(r);
    } else if (r >= 0) {
      a = i;
      b = static_cast<std::size_t>(r);
    } else if (l >= 0) {
      a = static_cast<std::size_t>(l);
      b = i;
    } else {
      pts[i].alpha = std::numeric_limits<double>::quiet_NaN();
      pts[i].f_alpha = std::numeric_limits<double>::quiet_NaN();
      pts[i].ok = false;
      continue;
    }
    pts[i].alpha = -(pts[b].tau - pts[a].tau) / (pts[b].q - pts[a].q);
    pts[i].f_alpha = pts[i].alpha * pts[i].q + pts[i].tau;
  }
  return pts;
}

}  // namespace mixmf
