#pragma once

// Mixed Lebesgue norms L^p_x L^q_v on phase-space fields, time norms, and the
// mixed-norm interpolation inequality.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "errors.hpp"
#include "phase_grid.hpp"
#include "reduce.hpp"

namespace kchemo {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline void check_exponent(double p, const char* name) {
  if (!(p >= 1.0)) throw InvalidArgument(std::string("exponent ") + name + " must be >= 1 or infinity");
}

/// (sum_i weight |v_i|^p)^(1/p); p = infinity gives max |v_i|.
inline double lp_norm(std::span<const double> vals, double weight, double p) {
  check_exponent(p, "p");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : vals) m = std::max(m, std::abs(v));
    return m;
  }
  std::vector<double> pw(vals.size());
  if (p == 1.0) {
    for (std::size_t i = 0; i < vals.size(); ++i) pw[i] = std::abs(vals[i]);
  } else {
    for (std::size_t i = 0; i < vals.size(); ++i) pw[i] = std::pow(std::abs(vals[i]), p);
  }
  const double s = weight * pairwise_sum(pw);
  return p == 1.0 ? s : std::pow(s, 1.0 / p);
}

inline double spatial_norm(const SpatialField& s, double p) { return lp_norm(s.values, s.grid->cell_volume(), p); }

struct NormSpec {
  double p = 1.0;  // position exponent (outer)
  double q = 1.0;  // velocity exponent (inner)
};

namespace detail {

// out[x] = sum over slices [first, first+count) of |f|^q (pairwise tree over slices).
inline void powered_slice_sum(const DistributionField& f, double q, std::size_t first, std::size_t count,
                              std::span<double> out) {
  const std::size_t n = f.grid->n_space();
  if (count <= kPairwiseBlock) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t j = first; j < first + count; ++j) {
      const auto s = f.slice(j);
      if (q == 1.0) {
        for (std::size_t i = 0; i < n; ++i) out[i] += std::abs(s[i]);
      } else if (q == 2.0) {
        for (std::size_t i = 0; i < n; ++i) out[i] += s[i] * s[i];
      } else {
        for (std::size_t i = 0; i < n; ++i) out[i] += std::pow(std::abs(s[i]), q);
      }
    }
    return;
  }
  const std::size_t half = count / 2;
  std::vector<double> right(n);
  powered_slice_sum(f, q, first, half, out);
  powered_slice_sum(f, q, first + half, count - half, right);
  for (std::size_t i = 0; i < n; ++i) out[i] += right[i];
}

}  // namespace detail

/// Per-position velocity norm ||f(x, .)||_{L^q_v}.
inline std::vector<double> velocity_norms(const DistributionField& f, double q) {
  check_exponent(q, "q");
  const auto& g = *f.grid;
  std::vector<double> inner(g.n_space(), 0.0);
  if (std::isinf(q)) {
    for (std::size_t j = 0; j < g.n_velocity(); ++j) {
      const auto s = f.slice(j);
      for (std::size_t i = 0; i < g.n_space(); ++i) inner[i] = std::max(inner[i], std::abs(s[i]));
    }
    return inner;
  }
  detail::powered_slice_sum(f, q, 0, g.n_velocity(), inner);
  const double w = g.velocity_weight();
  for (double& v : inner) v = (q == 1.0) ? w * v : std::pow(w * v, 1.0 / q);
  return inner;
}

/// || ||f(x, .)||_{L^q_v} ||_{L^p_x}.
inline double mixed_norm(const DistributionField& f, double p, double q) {
  check_exponent(p, "p");
  const auto inner = velocity_norms(f, q);
  return lp_norm(inner, f.grid->cell_volume(), p);
}

inline double mixed_norm(const DistributionField& f, const NormSpec& spec) { return mixed_norm(f, spec.p, spec.q); }

/// (sum_i dt a_i^r)^(1/r); r = infinity gives max.
inline double time_norm(std::span<const double> series, double r, double dt) {
  check_exponent(r, "r");
  if (series.empty()) return 0.0;
  if (!(dt > 0.0)) throw InvalidArgument("time_norm needs dt > 0");
  return lp_norm(series, dt, r);
}

struct InterpolationReport {
  double outer = 0.0;  // s with 1/s = 1 - theta + theta/p
  double inner = 0.0;  // c with 1/c = 1 - theta + theta/q
  double lhs = 0.0;    // ||f||_{L^s_x L^c_v}
  double l1 = 0.0;     // ||f||_{L^1_x L^1_v}
  double lpq = 0.0;    // ||f||_{L^p_x L^q_v}
  double rhs = 0.0;    // l1^(1-theta) lpq^theta
  bool holds = false;
};

/// Checks ||f||_{L^s_x L^c_v} <= ||f||_{L^1 L^1}^(1-theta) ||f||_{L^p_x L^q_v}^theta.
inline InterpolationReport interpolation_check(const DistributionField& f, double p, double q, double theta,
                                               double rel_tol = 1e-12) {
  check_exponent(p, "p");
  check_exponent(q, "q");
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("theta must lie in (0, 1)");
  InterpolationReport r;
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  r.outer = 1.0 / (1.0 - theta + theta * inv_p);
  r.inner = 1.0 / (1.0 - theta + theta * inv_q);
  r.lhs = mixed_norm(f, r.outer, r.inner);
  r.l1 = mixed_norm(f, 1.0, 1.0);
  r.lpq = mixed_norm(f, p, q);
  r.rhs = std::pow(r.l1, 1.0 - theta) * std::pow(r.lpq, theta);
  r.holds = r.lhs <= r.rhs * (1.0 + rel_tol);
  return r;
}

}  // namespace kchemo
