#pragma once

// Chemoattractant field: beta S - Laplace S = rho on the periodic box,
// truncated Newtonian kernels (d = 3), and the Bessel potential G of (1 - Laplace).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "norms.hpp"
#include "phase_grid.hpp"
#include "quadrature.hpp"
#include "spectral.hpp"

namespace kchemo {

struct FieldSolveSpec {
  int beta = 1;
  bool want_grad = true;
  bool want_hess = false;
  // beta = 0 on the torus is only solvable after removing the mean of rho.
  bool project_zero_mode = true;
};

/// Index of the (a, b) second derivative, a <= b, in FieldSet::hess.
inline int hess_index(int a, int b, int d) {
  if (a > b) std::swap(a, b);
  int idx = 0;
  for (int i = 0; i < a; ++i) idx += d - i;
  return idx + (b - a);
}

inline int hess_count(int d) { return d * (d + 1) / 2; }

struct FieldSet {
  GridPtr grid;
  int beta = 1;
  SpatialField S;
  std::vector<SpatialField> grad;  // d components, empty if not requested
  std::vector<SpatialField> hess;  // d(d+1)/2 components, a <= b
  double removed_mean = 0.0;

  bool has_grad() const { return !grad.empty(); }
  bool has_hess() const { return !hess.empty(); }

  const SpatialField& second(int a, int b) const { return hess.at(hess_index(a, b, grid->dimension())); }

  SpatialField grad_magnitude() const {
    if (grad.empty()) throw InvalidArgument("gradient was not computed");
    SpatialField m(grid, FieldTag::generic);
    for (std::size_t i = 0; i < m.values.size(); ++i) {
      double s = 0.0;
      for (const auto& g : grad) s += g.values[i] * g.values[i];
      m.values[i] = std::sqrt(s);
    }
    return m;
  }
};

/// Spectral solve: S^(k) = rho^(k) / (beta + |k|^2); derivatives by ik and -k_a k_b.
/// Nyquist modes are dropped from odd-order derivatives.
inline FieldSet solve_field(const SpatialField& rho, const FieldSolveSpec& spec, SpectralOps& ops) {
  if (spec.beta != 0 && spec.beta != 1) throw InvalidArgument("beta must be 0 or 1");
  const GridPtr& grid = rho.grid;
  const int d = grid->dimension();
  if (spec.beta == 0 && d < 2) throw InvalidArgument("beta = 0 needs dimension >= 2");
  if (ops.grid()->n_space() != grid->n_space() || ops.grid()->dimension() != d)
    throw InvalidArgument("spectral operator built for a different grid");

  auto rh = ops.forward(rho.values);
  FieldSet out;
  out.grid = grid;
  out.beta = spec.beta;
  if (spec.beta == 0) {
    const double mean = rh[0].real() / static_cast<double>(grid->n_space());
    double scale = 0.0;
    for (double v : rho.values) scale = std::max(scale, std::abs(v));
    if (!spec.project_zero_mode && std::abs(mean) > 1e-14 * std::max(scale, 1e-300))
      throw InvalidArgument("beta = 0 with non-zero-mean rho (mean " + std::to_string(mean) +
                            ") has no periodic solution; enable zero-mode projection");
    out.removed_mean = mean;
    rh[0] = 0.0;
  }

  std::vector<std::complex<double>> sh(rh.size());
  ops.for_each_mode([&](std::size_t c, const std::array<double, 3>& k, unsigned) {
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    const double den = spec.beta + k2;
    sh[c] = den == 0.0 ? std::complex<double>(0.0) : rh[c] / den;
  });
  out.S = SpatialField(grid, ops.inverse(sh), FieldTag::S);

  const std::complex<double> I(0.0, 1.0);
  std::vector<std::complex<double>> work(sh.size());
  if (spec.want_grad) {
    for (int a = 0; a < d; ++a) {
      ops.for_each_mode([&](std::size_t c, const std::array<double, 3>& k, unsigned nyq) {
        work[c] = (nyq & (1u << a)) ? std::complex<double>(0.0) : I * k[a] * sh[c];
      });
      out.grad.emplace_back(grid, ops.inverse(work), FieldTag::grad_S);
    }
  }
  if (spec.want_hess) {
    out.hess.resize(hess_count(d));
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) {
        ops.for_each_mode([&](std::size_t c, const std::array<double, 3>& k, unsigned nyq) {
          const bool drop = a != b && (nyq & ((1u << a) | (1u << b)));
          work[c] = drop ? std::complex<double>(0.0) : -k[a] * k[b] * sh[c];
        });
        out.hess[hess_index(a, b, d)] = SpatialField(grid, ops.inverse(work), FieldTag::hess_S);
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Truncated Newtonian kernels in d = 3.

enum class KernelRange { full, short_range, long_range };

/// Cutoff radius separating short and long range.
inline constexpr double kSplitRadius = 1.0;

namespace detail {

inline std::array<int, 3> min_image(const PhaseGrid& g, std::size_t flat) {
  auto idx = g.space_index(flat);
  for (int k = 0; k < 3; ++k)
    if (idx[k] > g.nx() / 2) idx[k] -= g.nx();
  return idx;
}

inline bool in_range(double r, KernelRange range) {
  switch (range) {
    case KernelRange::full: return true;
    case KernelRange::short_range: return r <= kSplitRadius;
    case KernelRange::long_range: return r > kSplitRadius;
  }
  return true;
}

inline void require_split_grid(const PhaseGrid& g) {
  if (g.dimension() != 3) throw InvalidArgument("truncated Newtonian kernels are defined for d = 3 only");
  if (2.0 * g.box_half_length() <= 4.0 * kSplitRadius) throw InvalidArgument("box side must exceed 4 for the split");
}

}  // namespace detail

/// Tabulates 1/(4 pi |x|^(order+1)), order in {0, 1}, at minimum-image
/// displacements (index 0 = zero displacement). The origin cell holds the
/// exact cell average of the singular kernel.
inline std::vector<double> tabulate_newtonian_kernel(const PhaseGrid& g, int order, KernelRange range) {
  detail::require_split_grid(g);
  if (order != 0 && order != 1) throw InvalidArgument("kernel order must be 0 or 1");
  const double c = 1.0 / (4.0 * std::numbers::pi);
  std::vector<double> k(g.n_space(), 0.0);
  for (std::size_t i = 0; i < k.size(); ++i) {
    const auto m = detail::min_image(g, i);
    const double r = g.hx() * std::sqrt(double(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]));
    if (!detail::in_range(r, range)) continue;
    k[i] = (r == 0.0) ? c * cube_average_inverse_power(order + 1, g.hx()) : c * std::pow(r, -(order + 1));
  }
  return k;
}

/// Tabulates -x_a / (4 pi |x|^3), the kernel of d_a S for beta = 0. Zero at
/// the origin and on the ambiguous Nyquist plane of axis a.
inline std::vector<double> tabulate_newtonian_gradient_kernel(const PhaseGrid& g, int axis) {
  detail::require_split_grid(g);
  const double c = 1.0 / (4.0 * std::numbers::pi);
  std::vector<double> k(g.n_space(), 0.0);
  for (std::size_t i = 0; i < k.size(); ++i) {
    const auto m = detail::min_image(g, i);
    if (std::abs(m[axis]) * 2 == g.nx()) continue;
    const double r2 = g.hx() * g.hx() * double(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
    if (r2 == 0.0) continue;
    k[i] = -c * g.hx() * m[axis] / (r2 * std::sqrt(r2));
  }
  return k;
}

/// Periodic convolutions with the tabulated d = 3 kernels; kernel transforms are cached.
class NewtonianOperator {
public:
  explicit NewtonianOperator(SpectralOps& ops) : ops_(ops) { detail::require_split_grid(*ops.grid()); }

  /// rho * 1/(4 pi |x|^(order+1)) restricted to `range`.
  SpatialField potential(const SpatialField& rho, int order, KernelRange range) {
    const int key = order * 3 + static_cast<int>(range);
    auto it = cache_.find(key);
    if (it == cache_.end())
      it = cache_.emplace(key, ops_.forward(tabulate_newtonian_kernel(*ops_.grid(), order, range))).first;
    FieldTag tag = FieldTag::generic;
    if (range == KernelRange::short_range) tag = order == 0 ? FieldTag::S_short : FieldTag::grad_S_short;
    if (range == KernelRange::long_range) tag = order == 0 ? FieldTag::S_long : FieldTag::grad_S_long;
    if (range == KernelRange::full && order == 0) tag = FieldTag::S;
    return convolve(rho, it->second, tag);
  }

  /// d_a of the full Newtonian potential.
  SpatialField gradient(const SpatialField& rho, int axis) {
    const int key = 100 + axis;
    auto it = cache_.find(key);
    if (it == cache_.end())
      it = cache_.emplace(key, ops_.forward(tabulate_newtonian_gradient_kernel(*ops_.grid(), axis))).first;
    return convolve(rho, it->second, FieldTag::grad_S);
  }

private:
  SpatialField convolve(const SpatialField& rho, const std::vector<std::complex<double>>& kh, FieldTag tag) {
    auto rh = ops_.forward(rho.values);
    for (std::size_t c = 0; c < rh.size(); ++c) rh[c] *= kh[c];
    auto v = ops_.inverse(rh);
    const double w = ops_.grid()->cell_volume();
    for (double& x : v) x *= w;
    return SpatialField(rho.grid, std::move(v), tag);
  }

  SpectralOps& ops_;
  std::map<int, std::vector<std::complex<double>>> cache_;
};

/// (short, long) parts of rho * 1/(4 pi |x|) (order 0) or rho * 1/(4 pi |x|^2) (order 1).
inline std::pair<SpatialField, SpatialField> split_short_long(const SpatialField& rho, int order, NewtonianOperator& op) {
  if (rho.grid->dimension() != 3) throw InvalidArgument("split_short_long needs d = 3");
  return {op.potential(rho, order, KernelRange::short_range), op.potential(rho, order, KernelRange::long_range)};
}

inline std::pair<SpatialField, SpatialField> split_short_long(const SpatialField& rho, int order, SpectralOps& ops) {
  NewtonianOperator op(ops);
  return split_short_long(rho, order, op);
}

/// beta = 0 fields from the Newtonian convolutions (S and grad S).
inline FieldSet newtonian_fields(const SpatialField& rho, NewtonianOperator& op) {
  FieldSet out;
  out.grid = rho.grid;
  out.beta = 0;
  out.S = op.potential(rho, 0, KernelRange::full);
  for (int a = 0; a < 3; ++a) out.grad.push_back(op.gradient(rho, a));
  return out;
}

/// Discrete L^q norm of the short-range kernel 1/(4 pi |x|^(order+1)) 1_{|x|<=1}.
inline double short_kernel_norm(const PhaseGrid& g, int order, double q) {
  const auto k = tabulate_newtonian_kernel(g, order, KernelRange::short_range);
  return lp_norm(k, g.cell_volume(), q);
}

// ---------------------------------------------------------------------------
// Bessel potential G = (1 - Laplace)^{-1} kernel,
//   G(r) = (1/4pi) int_0^inf exp(-pi r^2/s - s/(4pi)) s^{(2-d)/2} ds/s.

class BesselPotential {
public:
  explicit BesselPotential(int d) : d_(d) {
    if (d < 1 || d > 3) throw InvalidArgument("Bessel potential: dimension must be 1, 2 or 3");
  }

  int dimension() const { return d_; }

  double value(double r) const { return integrate(r, false); }
  /// |grad G|(r) = (1/4pi) int (2 pi r / s) exp(...) s^{(2-d)/2} ds/s.
  double gradient_magnitude(double r) const { return integrate(r, true); }

private:
  // Integrand in w = ln s is exp(ell(w)); ell is concave.
  double integrate(double r, bool grad) const {
    if (!(r > 0.0)) throw InvalidArgument("Bessel potential evaluated at r <= 0");
    const double a = std::numbers::pi * r * r;
    const double b = 1.0 / (4.0 * std::numbers::pi);
    const double c = 0.5 * (2 - d_) - (grad ? 1.0 : 0.0);
    const double pref = grad ? 2.0 * std::numbers::pi * r : 1.0;
    auto ell = [&](double w) { return -a * std::exp(-w) - b * std::exp(w) + c * w; };
    auto dell = [&](double w) { return a * std::exp(-w) - b * std::exp(w) + c; };
    double lo = -300.0, hi = 300.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (dell(mid) > 0.0 ? lo : hi) = mid;
    }
    const double wmax = 0.5 * (lo + hi);
    const double top = ell(wmax);
    double wl = wmax, wr = wmax;
    while (ell(wl) > top - 45.0) wl -= 0.5;
    while (ell(wr) > top - 45.0) wr += 0.5;

    auto f = [&](double w) { return std::exp(ell(w) - top); };
    // Trapezoid with successive halving until the relative change is below 1e-9.
    int n = 16;
    double h = (wr - wl) / n;
    double sum = 0.5 * (f(wl) + f(wr));
    for (int i = 1; i < n; ++i) sum += f(wl + i * h);
    double est = sum * h;
    for (int level = 0; level < 20; ++level) {
      double add = 0.0;
      for (int i = 0; i < n; ++i) add += f(wl + (i + 0.5) * h);
      sum += add;
      n *= 2;
      h *= 0.5;
      const double next = sum * h;
      const bool done = level >= 2 && std::abs(next - est) <= 1e-9 * std::abs(next);
      est = next;
      if (done) break;
    }
    return b * pref * std::exp(top) * est;
  }

  int d_;
};

/// Largest integrable exponent (exclusive) for G (order 0) or |grad G| (order 1).
inline double bessel_threshold(int order, int d) {
  if (order == 0) return d <= 2 ? kInf : double(d) / (d - 2);
  return d <= 1 ? kInf : double(d) / (d - 1);
}

/// L^p norm of G (order 0) or |grad G| (order 1) on R^d by radial quadrature in
/// u = ln r with `resolution` nodes, plus the analytic contribution of the
/// leading singular term on (0, r0).
inline double bessel_potential_norm(double p, int order, int d, int resolution = 400) {
  if (order != 0 && order != 1) throw InvalidArgument("order must be 0 or 1");
  if (!(p >= 1.0) || std::isinf(p)) throw InvalidArgument("Bessel norm needs a finite exponent p >= 1");
  const double thr = bessel_threshold(order, d);
  if (!(p < thr))
    throw InvalidArgument("p = " + std::to_string(p) + " is not integrable for order " + std::to_string(order) +
                          " in d = " + std::to_string(d) + " (need p < " + std::to_string(thr) + ")");
  if (resolution < 16) throw InvalidArgument("resolution too small");
  const BesselPotential G(d);
  auto F = [&](double r) { return order == 0 ? G.value(r) : G.gradient_magnitude(r); };
  const double omega = d == 1 ? 2.0 : (d == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi);
  const double r0 = 1e-6;
  const double rmax = 60.0 / p + 10.0;
  const double u0 = std::log(r0), u1 = std::log(rmax);
  const double h = (u1 - u0) / (resolution - 1);
  double sum = 0.0;
  for (int i = 0; i < resolution; ++i) {
    const double r = std::exp(u0 + i * h);
    const double term = std::pow(F(r), p) * std::pow(r, d);
    sum += (i == 0 || i == resolution - 1) ? 0.5 * term : term;
  }
  double body = omega * h * sum;

  // F ~ c r^{-gamma} near 0.
  double c = F(r0), gamma = 0.0;
  if (d == 3) {
    c = 1.0 / (4.0 * std::numbers::pi);
    gamma = order == 0 ? 1.0 : 2.0;
  } else if (d == 2 && order == 1) {
    c = 1.0 / (2.0 * std::numbers::pi);
    gamma = 1.0;
  }
  const double e = d - gamma * p;
  const double tail = omega * std::pow(c, p) * std::pow(r0, e) / e;
  return std::pow(body + tail, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Inequality checks on periodic solves (beta = 1).

struct GradientBoundReport {
  double grad_norm = 0.0;    // || |grad S| ||_p
  double mass = 0.0;         // ||rho||_1
  double kernel_norm = 0.0;  // || grad G ||_p
  double ratio = 0.0;
  bool pass = false;
};

/// || grad S ||_p <= ||rho||_1 || grad G ||_p (Young).
inline GradientBoundReport gradient_bound_check(const SpatialField& rho, double p, SpectralOps& ops,
                                                double tolerance = 0.02) {
  const int d = rho.grid->dimension();
  GradientBoundReport r;
  r.kernel_norm = bessel_potential_norm(p, 1, d);
  r.mass = lp_norm(rho.values, rho.grid->cell_volume(), 1.0);
  FieldSolveSpec spec;
  spec.beta = 1;
  const FieldSet fs = solve_field(rho, spec, ops);
  r.grad_norm = spatial_norm(fs.grad_magnitude(), p);
  r.ratio = r.mass > 0.0 ? r.grad_norm / (r.mass * r.kernel_norm) : 0.0;
  r.pass = r.ratio <= 1.0 + tolerance;
  return r;
}

struct CalderonZygmundReport {
  double laplacian_norm = 0.0;
  double max_ratio = 0.0;  // max_{a<=b} ||d_ab S||_p / ||Laplace S||_p
  int worst_a = 0, worst_b = 0;
};

inline CalderonZygmundReport calderon_zygmund_check(const SpatialField& rho, double p, SpectralOps& ops) {
  if (!(p > 1.0) || std::isinf(p)) throw InvalidArgument("Calderon-Zygmund check needs 1 < p < infinity");
  const int d = rho.grid->dimension();
  FieldSolveSpec spec;
  spec.beta = 1;
  spec.want_grad = false;
  spec.want_hess = true;
  const FieldSet fs = solve_field(rho, spec, ops);
  std::vector<double> lap(rho.grid->n_space(), 0.0);
  for (int a = 0; a < d; ++a) {
    const auto& h = fs.second(a, a).values;
    for (std::size_t i = 0; i < lap.size(); ++i) lap[i] += h[i];
  }
  CalderonZygmundReport r;
  r.laplacian_norm = lp_norm(lap, rho.grid->cell_volume(), p);
  if (r.laplacian_norm == 0.0) return r;
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      const double q = spatial_norm(fs.second(a, b), p) / r.laplacian_norm;
      if (q > r.max_ratio) {
        r.max_ratio = q;
        r.worst_a = a;
        r.worst_b = b;
      }
    }
  return r;
}

}  // namespace kchemo
