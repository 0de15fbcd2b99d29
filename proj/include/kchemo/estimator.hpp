#pragma once

// Free-transport estimates: dispersion decay of mixed norms, the discrete
// dispersion inequality at exact-shift times, and Strichartz quotients.

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "exponents.hpp"
#include "norms.hpp"
#include "phase_grid.hpp"
#include "transport.hpp"

namespace kchemo {

/// f0(x, v) = amplitude prod_k g(x_k) h(v_k) with Gaussian g (width sigma) and
/// Gaussian h (width tau) cut off at |v_k| <= R = 6 tau. The free solution is a
/// tensor product, so every mixed norm is the d-th power of a one-axis norm.
struct SeparableGaussian {
  double amplitude = 1.0;
  double sigma = 0.25;
  double tau = 1.0 / 6.0;
  double cutoff() const { return 6.0 * tau; }
};

/// One-axis L^p_x L^q_v norm of g(x - t v) h(v) on a grid fine enough for time t:
/// hx = sigma/4, hv <= min(tau, sigma/t)/4, |x| <= t R + 10 sigma. Entries
/// with |x - t v| > 10 sigma (below e^-50 of the peak) are skipped.
inline double separable_axis_norm(const SeparableGaussian& g, double p, double q, double t) {
  check_exponent(p, "p");
  check_exponent(q, "q");
  if (t < 0.0) throw InvalidArgument("time must be non-negative");
  const double R = g.cutoff();
  const double W = 10.0 * g.sigma;
  const double hx = g.sigma / 4.0;
  const long half = static_cast<long>(std::ceil((t * R + W) / hx));
  const long nx = 2 * half;  // nodes -half..half, symmetric about x = 0
  double hv = 0.25 * (t > 0.0 ? std::min(g.tau, g.sigma / t) : g.tau);
  const long nv = 2 * static_cast<long>(std::ceil(R / hv));
  hv = 2.0 * R / nv;
  auto gx = [&](double y) { return std::exp(-y * y / (2.0 * g.sigma * g.sigma)); };
  auto hvf = [&](double v) { return std::exp(-v * v / (2.0 * g.tau * g.tau)); };

  std::vector<double> inner(nx + 1);
  for (long i = 0; i <= nx; ++i) {
    const double x = (i - half) * hx;
    long j0 = 0, j1 = nv - 1;
    if (t > 0.0) {
      j0 = std::max(0L, static_cast<long>(std::floor(((x - W) / t + R) / hv - 0.5)));
      j1 = std::min(nv - 1, static_cast<long>(std::ceil(((x + W) / t + R) / hv - 0.5)));
    }
    double acc = 0.0;
    for (long j = j0; j <= j1; ++j) {
      const double v = -R + (j + 0.5) * hv;
      const double f = gx(x - t * v) * hvf(v);
      if (std::isinf(q)) acc = std::max(acc, f);
      else acc += hv * std::pow(f, q);
    }
    inner[i] = std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
  }
  return lp_norm(inner, hx, p);
}

/// d-dimensional mixed norm of the free solution at time t.
inline double separable_norm(const SeparableGaussian& g, int d, double p, double q, double t) {
  return std::abs(g.amplitude) * std::pow(separable_axis_norm(g, p, q, t), d);
}

struct DecayFit {
  std::vector<double> times, norms;
  double slope = 0.0;
  double theoretical_slope = 0.0;  // -d (1/q - 1/p)
  double relative_deviation = 0.0;
  double initial_swapped = 0.0;    // ||f0||_{L^q_x L^p_v}
  double worst_inequality_ratio = 0.0;  // max_t ||f(t)|| / (t^{-d(1/q-1/p)} ||f0||_{q,p})
  bool slope_ok = false;
  bool inequality_ok = false;
  bool pass() const { return slope_ok && inequality_ok; }
};

/// Least-squares slope of log ||f(t)||_{p,q} against log t on log-spaced times
/// in [10, 40] sigma/tau, where this data class follows its asymptotic rate.
inline DecayFit dispersion_decay_fit(const SeparableGaussian& g, int d, double p, double q, int samples = 12,
                                     double slope_tol = 0.10, double slack = 0.05) {
  if (!(p >= q)) throw InvalidArgument("dispersion needs p >= q");
  if (samples < 2) throw InvalidArgument("need at least two samples");
  DecayFit fit;
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  const double rate = d * (inv_q - inv_p);
  fit.theoretical_slope = -rate;
  fit.initial_swapped = separable_norm(g, d, q, p, 0.0);
  const double t0 = 10.0 * g.sigma / g.tau, t1 = 40.0 * g.sigma / g.tau;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < samples; ++k) {
    const double t = t0 * std::pow(t1 / t0, double(k) / (samples - 1));
    const double n = separable_norm(g, d, p, q, t);
    fit.times.push_back(t);
    fit.norms.push_back(n);
    const double x = std::log(t), y = std::log(n);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    const double ratio = n / (std::pow(t, -rate) * fit.initial_swapped);
    fit.worst_inequality_ratio = std::max(fit.worst_inequality_ratio, ratio);
  }
  const double m = samples;
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.relative_deviation = rate == 0.0 ? std::abs(fit.slope) : std::abs(fit.slope - fit.theoretical_slope) / rate;
  fit.slope_ok = fit.relative_deviation <= slope_tol;
  fit.inequality_ok = fit.worst_inequality_ratio <= 1.0 + slack;
  return fit;
}

struct DispersionCheck {
  double t = 0.0;
  double lhs = 0.0;  // ||f(t)||_{L^p_x L^q_v}
  double rhs = 0.0;  // t^{-d(1/q-1/p)} ||h||_{L^q_x L^p_v}
  double ratio = 0.0;
  bool pass = false;
};

/// Evolves h freely to the m-th exact-shift time (every node moves a whole
/// number of cells, so transport is an exact roll) and compares both sides.
inline DispersionCheck dispersion_inequality_check(const DistributionField& h, double p, double q, int m,
                                                   double slack = 0.05) {
  if (!(p >= q)) throw InvalidArgument("dispersion needs p >= q");
  if (m < 1) throw InvalidArgument("shift multiple must be positive");
  const auto& g = *h.grid;
  DispersionCheck c;
  c.t = exact_shift_time(g, m);
  const DistributionField f = transport_step(h, c.t);
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  c.lhs = mixed_norm(f, p, q);
  c.rhs = std::pow(c.t, -g.dimension() * (inv_q - inv_p)) * mixed_norm(h, q, p);
  c.ratio = c.rhs > 0.0 ? c.lhs / c.rhs : 0.0;
  c.pass = c.lhs <= (1.0 + slack) * c.rhs;
  return c;
}

/// Velocity-independent data h(x) 1_V(v): the right side becomes
/// |V|^{1/p} t^{-d(1/q-1/p)} ||h||_{L^q_x}.
inline DispersionCheck dispersion_inequality_check(const SpatialField& h, double p, double q, int m,
                                                   double slack = 0.05) {
  const auto& g = *h.grid;
  DistributionField f(h.grid);
  for (std::size_t j = 0; j < g.n_velocity(); ++j) std::copy(h.values.begin(), h.values.end(), f.slice(j).begin());
  auto c = dispersion_inequality_check(f, p, q, m, slack);
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  c.rhs = std::pow(g.velocity_measure(), inv_p) * std::pow(c.t, -g.dimension() * (inv_q - inv_p)) *
          spatial_norm(h, q);
  c.ratio = c.rhs > 0.0 ? c.lhs / c.rhs : 0.0;
  c.pass = c.lhs <= (1.0 + slack) * c.rhs;
  return c;
}

/// Random smooth compactly supported data: one to three products of
/// cos^2 bumps in x (half-width >= min_width, support inside |x_k| <= reach)
/// times a smooth positive velocity profile.
inline DistributionField random_bump_field(const GridPtr& grid, std::mt19937_64& rng, double min_width, double reach) {
  const auto& g = *grid;
  const int d = g.dimension();
  if (!(min_width > 0.0 && reach > min_width)) throw InvalidArgument("need 0 < min_width < reach");
  std::uniform_real_distribution<double> U(0.0, 1.0);
  DistributionField f(grid);
  const int bumps = 1 + static_cast<int>(U(rng) * 3.0) % 3;
  for (int b = 0; b < bumps; ++b) {
    const double amp = 0.2 + U(rng);
    Vec3 c{0, 0, 0}, w{1, 1, 1}, k{0, 0, 0};
    for (int a = 0; a < d; ++a) {
      w[a] = min_width * (1.0 + U(rng));
      const double room = std::max(0.0, reach - w[a]);
      c[a] = (2.0 * U(rng) - 1.0) * room;
      k[a] = (2.0 * U(rng) - 1.0) * 2.0 / g.max_speed();
    }
    const double phase = 2.0 * std::numbers::pi * U(rng);
    const double depth = 0.8 * U(rng);
    for (std::size_t j = 0; j < g.n_velocity(); ++j) {
      const Vec3& v = g.velocity(j);
      double kv = phase;
      for (int a = 0; a < d; ++a) kv += k[a] * v[a];
      const double hv = 1.0 + depth * std::sin(kv);
      auto s = f.slice(j);
      for (std::size_t i = 0; i < g.n_space(); ++i) {
        const Vec3 x = g.position(i);
        double bump = amp * hv;
        for (int a = 0; a < d && bump != 0.0; ++a) {
          const double y = (x[a] - c[a]) / w[a];
          bump = std::abs(y) < 1.0 ? bump * std::pow(std::cos(0.5 * std::numbers::pi * y), 2) : 0.0;
        }
        s[i] += bump;
      }
    }
  }
  return f;
}

struct StrichartzResult {
  double quotient = 0.0;        // ||f||_{L^r_t(0,T) L^p_x L^q_v} / ||f0||_{L^a}
  double data_norm = 0.0;       // ||f0||_{L^a_{x,v}}
  std::vector<double> times, norms;
};

/// Q(T) for separable Gaussian data, midpoint samples in time.
inline StrichartzResult strichartz_quotient(const SeparableGaussian& g, const ExponentQuadruple& quad, double T_end,
                                            int samples = 400) {
  const auto adm = strichartz_admissible(quad);
  if (!adm.admissible) throw InvalidArgument("quadruple is not admissible: " + adm.failure);
  if (adm.endpoint_r_infinite) throw InvalidArgument("p = q gives r = infinity, excluded from time norms");
  if (!(T_end > 0.0) || samples < 1) throw InvalidArgument("need T_end > 0 and samples >= 1");
  const int d = quad.dimension;
  const double p = quad.p.to_double(), q = quad.q.to_double(), r = quad.r.to_double(), a = quad.a.to_double();
  StrichartzResult res;
  res.data_norm = separable_norm(g, d, a, a, 0.0);
  if (res.data_norm == 0.0) return res;
  const double dt = T_end / samples;
  for (int k = 0; k < samples; ++k) {
    const double t = (k + 0.5) * dt;
    res.times.push_back(t);
    res.norms.push_back(separable_norm(g, d, p, q, t));
  }
  res.quotient = time_norm(res.norms, r, dt) / res.data_norm;
  return res;
}

}  // namespace kchemo
