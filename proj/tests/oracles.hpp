#pragma once

// Test-side oracles, written against the definitions alone: plain-double
// brute force over explicit digit words, no shared code with the library.
// Where a quantity has a closed form, the oracle evaluates that form
// directly with std::pow / std::log.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

struct cascade {
  std::size_t b = 0;
  std::vector<double> ratios;
  std::vector<double> offsets;  // must be explicit here
  std::vector<double> weights;
};

// All length-n digit words over the branches kept by `keep`.
inline void for_each_word(const cascade& c, int n,
                          const std::function<bool(std::size_t)>& keep,
                          const std::function<void(
                              const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> word;
  std::function<void()> rec = [&]() {
    if (static_cast<int>(word.size()) == n) {
      visit(word);
      return;
    }
    for (std::size_t i = 0; i < c.b; ++i) {
      if (!keep(i)) continue;
      word.push_back(i);
      rec();
      word.pop_back();
    }
  };
  rec();
}

struct interval {
  double left = 0.0;
  double length = 1.0;
};

inline interval word_interval(const cascade& c,
                              const std::vector<std::size_t>& word) {
  interval iv;
  for (std::size_t d : word) {
    iv.left += c.offsets[d] * iv.length;
    iv.length *= c.ratios[d];
  }
  return iv;
}

inline double word_mass(const cascade& c,
                        const std::vector<std::size_t>& word) {
  double m = 1.0;
  for (std::size_t d : word) m *= c.weights[d];
  return m;
}

// Brackets the CDF at depth n: [sum of cells fully left of x,
// same + masses of cells straddling x].
struct cdf_bracket {
  double lo = 0.0;
  double hi = 0.0;
};

inline cdf_bracket cdf_bounds(const cascade& c, double x, int n) {
  cdf_bracket b;
  for_each_word(
      c, n, [&](std::size_t i) { return c.weights[i] > 0.0; },
      [&](const std::vector<std::size_t>& w) {
        const interval iv = word_interval(c, w);
        const double m = word_mass(c, w);
        if (iv.left + iv.length <= x) {
          b.lo += m;
          b.hi += m;
        } else if (iv.left < x) {
          b.hi += m;
        }
      });
  return b;
}

// Kernel value by direct power products over one cell of a joint family.
inline double gamma_direct(const std::vector<double>& q, double t,
                           const std::vector<double>& mu_masses,
                           double ref) {
  double v = 1.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    v *= std::pow(mu_masses[j], q[j]);
  }
  return v * std::pow(ref, t);
}

// Depth-n partition sum by full enumeration, direct arithmetic. The
// component cascades and the reference share ratios/offsets; `use_diam`
// swaps the reference mass for the cell diameter.
inline double partition_sum_direct(const std::vector<cascade>& mus,
                                   const cascade& nu,
                                   const std::vector<double>& q, double t,
                                   int n, bool use_diam = false) {
  double total = 0.0;
  auto keep = [&](std::size_t i) {
    if (!(nu.weights[i] > 0.0)) return false;
    for (const auto& m : mus) {
      if (!(m.weights[i] > 0.0)) return false;
    }
    return true;
  };
  for_each_word(nu, n, keep, [&](const std::vector<std::size_t>& w) {
    std::vector<double> mm(mus.size());
    for (std::size_t j = 0; j < mus.size(); ++j) {
      mm[j] = word_mass(mus[j], w);
    }
    const double ref =
        use_diam ? word_interval(nu, w).length : word_mass(nu, w);
    total += gamma_direct(q, t, mm, ref);
  });
  return total;
}

// Root of sum_i (prod_j p_{j,i}^{q_j}) w_i^t = 1 by plain bisection on
// [-100, 100] to 1e-13. w_i is the nu weight, or the ratio with use_diam.
inline double depth1_root(const std::vector<cascade>& mus, const cascade& nu,
                          const std::vector<double>& q,
                          bool use_diam = false) {
  auto keep = [&](std::size_t i) {
    if (!(nu.weights[i] > 0.0)) return false;
    for (const auto& m : mus) {
      if (!(m.weights[i] > 0.0)) return false;
    }
    return true;
  };
  auto f = [&](double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < nu.b; ++i) {
      if (!keep(i)) continue;
      double phi = 1.0;
      for (std::size_t j = 0; j < mus.size(); ++j) {
        phi *= std::pow(mus[j].weights[i], q[j]);
      }
      s += phi * std::pow(use_diam ? nu.ratios[i] : nu.weights[i], t);
    }
    return s - 1.0;  // strictly decreasing in t
  };
  double lo = -100.0, hi = 100.0;
  if (f(lo) < 0.0 || f(hi) > 0.0) {
    throw std::runtime_error("depth1_root: no root in bracket");
  }
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-13) break;
  }
  return 0.5 * (lo + hi);
}

// Sum of gamma over depth-n cells contained in [lo, hi], by enumeration.
inline double premeasure_direct(const std::vector<cascade>& mus,
                                const cascade& nu,
                                const std::vector<double>& q, double t,
                                double lo, double hi, int n) {
  double total = 0.0;
  const double tol = 1e-12 * (hi - lo);
  auto keep = [&](std::size_t i) {
    if (!(nu.weights[i] > 0.0)) return false;
    for (const auto& m : mus) {
      if (!(m.weights[i] > 0.0)) return false;
    }
    return true;
  };
  for_each_word(nu, n, keep, [&](const std::vector<std::size_t>& w) {
    const interval iv = word_interval(nu, w);
    if (iv.left < lo - tol || iv.left + iv.length > hi + tol) return;
    std::vector<double> mm(mus.size());
    for (std::size_t j = 0; j < mus.size(); ++j) {
      mm[j] = word_mass(mus[j], w);
    }
    total += gamma_direct(q, t, mm, word_mass(nu, w));
  });
  return total;
}

// Shannon entropy in bits; -tau'(q) of a two-branch equal-ratio cascade
// evaluates to this at q = 1.
inline double entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

// tau(q) = log2(sum p_i^q) for equal-1/2-ratio cascades against Lebesgue,
// and its exact derivative, for spectrum cross-checks.
inline double tau_binary(const std::vector<double>& p, double q) {
  double s = 0.0;
  for (double v : p) {
    if (v > 0.0) s += std::pow(v, q);
  }
  return std::log2(s);
}

inline double minus_tau_prime_binary(const std::vector<double>& p, double q) {
  double s = 0.0, ds = 0.0;
  for (double v : p) {
    if (v > 0.0) {
      s += std::pow(v, q);
      ds += std::pow(v, q) * std::log(v);
    }
  }
  return -(ds / s) / std::log(2.0);
}

}  // namespace oracle
