#pragma once

// Shared numeric helpers: compensated summation, log-space reduction,
// least-squares slopes, and monotone bisection.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>

namespace mixmf {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

// Neumaier-compensated accumulator. Deterministic for a fixed add order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// log(sum(exp(logs))) with a max shift and one compensated pass.
// Empty input and all -inf inputs yield -inf.
inline double log_sum_exp(std::span<const double> logs) {
  double m = kNegInf;
  for (double v : logs) m = std::max(m, v);
  if (!(m > kNegInf)) return kNegInf;
  CompensatedSum acc;
  for (double v : logs) acc.add(std::exp(v - m));
  return m + std::log(acc.value());
}

// Ordinary least-squares slope of y against x. Needs >= 2 distinct x.
inline double ls_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

struct BisectResult {
  double root = 0.0;
  double residual = 0.0;  // |exp(f(root)) - 1| for log-space targets
  std::size_t iterations = 0;
  bool converged = false;
};

// Root of a strictly decreasing f on [lo, hi] with f(lo) >= 0 >= f(hi).
// f is interpreted as a log-space quantity: the stopping residual is
// |expm1(f(mid))| <= tol.
template <class F>
BisectResult bisect_decreasing(F&& f, double lo, double hi, double tol,
                               std::size_t max_iter) {
  BisectResult out;
  double mid = 0.5 * (lo + hi);
  double fm = 0.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    mid = 0.5 * (lo + hi);
    fm = f(mid);
    out.iterations = it + 1;
    out.residual = std::abs(std::expm1(fm));
    if (out.residual <= tol) {
      out.converged = true;
      break;
    }
    if (fm > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.root = mid;
  return out;
}

}  // namespace mixmf
