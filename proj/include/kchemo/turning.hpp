#pragma once

// Turning kernels T[S](x, v, v') (rate of switching v' -> v), the scattering
// operator  int_V T f' - T* f dv', and kernel mixed norms.
//
// Every family is T = max(0, A(x, v) + B(x, v')): a part sensing S around
// x + eps v and a part sensing S around x - eps v' (or x +- eps v' for hyp3).
// For non-negative T this turns gain and loss into O(Nx Nv) sums; the
// saturation clamp falls back to the dense O(Nx Nv^2) form.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "chemo_field.hpp"
#include "errors.hpp"
#include "norms.hpp"
#include "phase_grid.hpp"
#include "reduce.hpp"
#include "shift.hpp"

namespace kchemo {

enum class KernelFamily { constant, hyp1, hyp2, hyp3 };

inline std::string to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::constant: return "constant";
    case KernelFamily::hyp1: return "hyp1";
    case KernelFamily::hyp2: return "hyp2";
    case KernelFamily::hyp3: return "hyp3";
  }
  return "?";
}

struct KernelSpec {
  KernelFamily family = KernelFamily::constant;
  double C = 1.0;
  double epsilon = 1.0;  // memory / sensing offset scale
  // hyp3 only: signs and active flags for |S(x+-v)|, |S(x+-v')|, |grad S|(x+-v), |grad S|(x+-v').
  std::array<int, 4> signs{+1, +1, +1, +1};
  std::array<bool, 4> active{true, true, true, true};
  std::optional<double> saturation;  // T <= T_max when set
};

/// hyp3 multiplicities: number of active S terms and active grad S terms.
inline std::pair<int, int> hyp3_multiplicity(const KernelSpec& k) {
  return {int(k.active[0]) + int(k.active[1]), int(k.active[2]) + int(k.active[3])};
}

/// Grid fields a kernel needs, sampled at the nodes.
struct KernelFields {
  GridPtr grid;
  std::vector<double> S;
  std::vector<double> grad_mag;    // |grad S|
  std::vector<double> deriv_sum;   // sum_{|alpha| <= 2} |d^alpha S|
};

inline KernelFields kernel_fields(const KernelSpec& spec, const FieldSet& fs) {
  KernelFields kf;
  kf.grid = fs.grid;
  if (spec.family == KernelFamily::constant) return kf;
  kf.S = fs.S.values;
  if (spec.family == KernelFamily::hyp1 || spec.family == KernelFamily::hyp3 || spec.family == KernelFamily::hyp2) {
    if (!fs.has_grad()) throw InvalidArgument(to_string(spec.family) + " kernel needs grad S");
    kf.grad_mag = fs.grad_magnitude().values;
  }
  if (spec.family == KernelFamily::hyp2) {
    if (!fs.has_hess()) throw InvalidArgument("hyp2 kernel needs the second derivatives of S");
    const int d = fs.grid->dimension();
    kf.deriv_sum.assign(kf.S.size(), 0.0);
    for (std::size_t i = 0; i < kf.S.size(); ++i) {
      double s = std::abs(kf.S[i]);
      for (int a = 0; a < d; ++a) s += std::abs(fs.grad[a].values[i]);
      for (const auto& h : fs.hess) s += std::abs(h.values[i]);
      kf.deriv_sum[i] = s;
    }
  }
  return kf;
}

/// One shifted contribution: value(field)(x + sign eps w), w = v (primed = false) or v'.
struct KernelTerm {
  bool primed = false;
  int sign = +1;
  bool take_abs = false;
  std::vector<double> field;
};

struct KernelPlan {
  double constant = 0.0;  // added to A
  std::vector<KernelTerm> terms;
};

inline KernelPlan kernel_plan(const KernelSpec& spec, const KernelFields& kf) {
  if (!(spec.C >= 0.0)) throw InvalidArgument("kernel coefficient C must be non-negative");
  if (!(spec.epsilon >= 0.0)) throw InvalidArgument("memory scale epsilon must be non-negative");
  KernelPlan plan;
  const double C = spec.C;
  auto scaled = [&](const std::vector<double>& a, const std::vector<double>* b, bool abs_parts) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double x = abs_parts ? std::abs(a[i]) : a[i];
      const double y = b ? (abs_parts ? std::abs((*b)[i]) : (*b)[i]) : 0.0;
      out[i] = C * (x + y);
    }
    return out;
  };
  switch (spec.family) {
    case KernelFamily::constant: plan.constant = C; break;
    case KernelFamily::hyp1:
      plan.constant = C;
      plan.terms.push_back({false, +1, false, scaled(kf.S, &kf.grad_mag, false)});
      plan.terms.push_back({true, -1, false, scaled(kf.S, nullptr, false)});
      break;
    case KernelFamily::hyp2:
      plan.constant = C;
      plan.terms.push_back({false, +1, false, scaled(kf.deriv_sum, nullptr, false)});
      break;
    case KernelFamily::hyp3:
      for (int role = 0; role < 2; ++role) {
        const int is = role, ig = role + 2;  // S term and grad term for this role
        const bool primed = role == 1;
        for (int s : spec.signs)
          if (s != 1 && s != -1) throw InvalidArgument("hyp3 signs must be +1 or -1");
        const bool as = spec.active[is], ag = spec.active[ig];
        if (as && ag && spec.signs[is] == spec.signs[ig]) {
          plan.terms.push_back({primed, spec.signs[is], true, scaled(kf.S, &kf.grad_mag, true)});
        } else {
          if (as) plan.terms.push_back({primed, spec.signs[is], true, scaled(kf.S, nullptr, true)});
          if (ag) plan.terms.push_back({primed, spec.signs[ig], true, scaled(kf.grad_mag, nullptr, true)});
        }
      }
      break;
  }
  return plan;
}

/// Tensor-product periodic cubic Lagrange interpolation of grid data at a point.
inline double interpolate_periodic(std::span<const double> data, const PhaseGrid& g, const Vec3& p) {
  const int d = g.dimension();
  const int n = g.nx();
  std::array<std::array<double, 4>, 3> w{};
  std::array<int, 3> base{0, 0, 0};
  for (int a = 0; a < 3; ++a) w[a] = {0.0, 1.0, 0.0, 0.0};
  for (int a = 0; a < d; ++a) {
    const double s = (p[a] + g.box_half_length()) / g.hx();
    const double fl = std::floor(s);
    const double t = s - fl;
    base[a] = static_cast<int>(fl);
    w[a] = {-t * (t - 1) * (t - 2) / 6.0, (t + 1) * (t - 1) * (t - 2) / 2.0, -(t + 1) * t * (t - 2) / 2.0,
            (t + 1) * t * (t - 1) / 6.0};
  }
  double acc = 0.0;
  const int r1 = d > 1 ? 4 : 1, r2 = d > 2 ? 4 : 1;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < r1; ++j)
      for (int k = 0; k < r2; ++k) {
        std::array<int, 3> idx{base[0] + i - 1, base[1] + j - 1, base[2] + k - 1};
        for (int a = 0; a < 3; ++a) idx[a] = ((idx[a] % n) + n) % n;
        const double wt = w[0][i] * (d > 1 ? w[1][j] : 1.0) * (d > 2 ? w[2][k] : 1.0);
        acc += wt * data[g.flat_space_index(idx)];
      }
  return acc;
}

inline double apply_kernel_limits(const KernelSpec& spec, double raw) {
  double t = std::max(0.0, raw);
  if (spec.saturation) t = std::min(t, *spec.saturation);
  return t;
}

/// T[S](x, v, v') at an arbitrary point, fields interpolated periodically.
inline double evaluate_kernel(const KernelSpec& spec, const KernelFields& kf, const Vec3& x, const Vec3& v,
                              const Vec3& vp) {
  const auto plan = kernel_plan(spec, kf);
  double raw = plan.constant;
  for (const auto& term : plan.terms) {
    const Vec3& w = term.primed ? vp : v;
    Vec3 p = x;
    for (int a = 0; a < kf.grid->dimension(); ++a) p[a] += term.sign * spec.epsilon * w[a];
    const double val = interpolate_periodic(term.field, *kf.grid, p);
    raw += term.take_abs ? std::abs(val) : val;
  }
  return apply_kernel_limits(spec, raw);
}

inline double evaluate_kernel(const KernelSpec& spec, const FieldSet& fs, const Vec3& x, const Vec3& v, const Vec3& vp) {
  return evaluate_kernel(spec, kernel_fields(spec, fs), x, v, vp);
}

/// A(x, v_j) and B(x, v_j) on the grid, layout [v][x].
struct KernelTables {
  GridPtr grid;
  KernelSpec spec;
  std::vector<double> A, B;
  bool separable = true;  // T = A + B holds without clamping

  double value(std::size_t x, std::size_t v, std::size_t vp) const {
    const std::size_t n = grid->n_space();
    return apply_kernel_limits(spec, A[v * n + x] + B[vp * n + x]);
  }
};

inline KernelTables kernel_tables(const KernelSpec& spec, const KernelFields& kf, ShiftWorkspace& ws) {
  const auto& g = *kf.grid;
  const std::size_t n = g.n_space(), nv = g.n_velocity();
  KernelTables kt;
  kt.grid = kf.grid;
  kt.spec = spec;
  const auto plan = kernel_plan(spec, kf);
  kt.A.assign(n * nv, plan.constant);
  kt.B.assign(n * nv, 0.0);
  for (std::size_t j = 0; j < nv; ++j) {
    const Vec3& v = g.velocity(j);
    for (const auto& term : plan.terms) {
      // F(x + sign eps v) = translated by -sign eps v.
      std::array<double, 3> off{0.0, 0.0, 0.0};
      for (int a = 0; a < g.dimension(); ++a) off[a] = -term.sign * spec.epsilon * v[a];
      const auto sh = translated(term.field, g.dimension(), g.nx(), g.hx(), off, ws, false);
      double* dst = (term.primed ? kt.B.data() : kt.A.data()) + j * n;
      for (std::size_t i = 0; i < n; ++i) dst[i] += term.take_abs ? std::abs(sh[i]) : sh[i];
    }
  }
  kt.separable = !spec.saturation.has_value();
  if (kt.separable) {
    std::vector<double> amin(n, kInf), bmin(n, kInf);
    for (std::size_t j = 0; j < nv; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        amin[i] = std::min(amin[i], kt.A[j * n + i]);
        bmin[i] = std::min(bmin[i], kt.B[j * n + i]);
      }
    for (std::size_t i = 0; i < n && kt.separable; ++i)
      if (amin[i] + bmin[i] < 0.0) kt.separable = false;
  }
  return kt;
}

inline KernelTables kernel_tables(const KernelSpec& spec, const FieldSet& fs) {
  ShiftWorkspace ws;
  return kernel_tables(spec, kernel_fields(spec, fs), ws);
}

struct ScatteringTerms {
  std::vector<double> gain, loss_rate;  // [v][x]; loss = loss_rate * f
};

inline ScatteringTerms scattering_terms(const DistributionField& f, const KernelTables& kt) {
  const auto& g = *f.grid;
  const std::size_t n = g.n_space(), nv = g.n_velocity();
  const double w = g.velocity_weight();
  ScatteringTerms st;
  st.gain.assign(n * nv, 0.0);
  st.loss_rate.assign(n * nv, 0.0);
  if (kt.separable) {
    // gain = A rho + sum_v' w B f(v');  loss rate = sum_v' w A(v') + |V| B(v).
    const SpatialField rho = density(f);
    std::vector<double> bf(n * nv), sumA(n, 0.0), sumBf(n, 0.0);
    for (std::size_t k = 0; k < n * nv; ++k) bf[k] = kt.B[k] * f.values[k];
    pairwise_slice_sum(kt.A, n, 0, nv, sumA);
    pairwise_slice_sum(bf, n, 0, nv, sumBf);
    const double vol = g.velocity_measure();
    for (std::size_t j = 0; j < nv; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = j * n + i;
        st.gain[k] = kt.A[k] * rho.values[i] + w * sumBf[i];
        st.loss_rate[k] = w * sumA[i] + vol * kt.B[k];
      }
    return st;
  }
  std::vector<double> row(nv);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < nv; ++j) {
      for (std::size_t jp = 0; jp < nv; ++jp) row[jp] = kt.value(i, j, jp) * f.at(i, jp);
      st.gain[j * n + i] = w * pairwise_sum(row);
      for (std::size_t jp = 0; jp < nv; ++jp) row[jp] = kt.value(i, jp, j);
      st.loss_rate[j * n + i] = w * pairwise_sum(row);
    }
  return st;
}

/// Largest loss rate sup_{x,v} int_V T(x, v', v) dv'.
inline double max_loss_rate(const DistributionField& f, const KernelTables& kt) {
  const auto st = scattering_terms(f, kt);
  return *std::max_element(st.loss_rate.begin(), st.loss_rate.end());
}

/// Explicit Euler step of the scattering operator with the positivity guard
/// dt * max loss rate < 1.
inline DistributionField scattering_apply(const DistributionField& f, const KernelTables& kt, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("scattering step needs dt > 0");
  const auto st = scattering_terms(f, kt);
  const double rate = st.loss_rate.empty() ? 0.0 : *std::max_element(st.loss_rate.begin(), st.loss_rate.end());
  if (dt * rate >= 1.0)
    throw GuardAbort("scattering positivity guard: dt * max loss rate = " + std::to_string(dt * rate) +
                     " >= 1; need dt < " + std::to_string(1.0 / rate));
  DistributionField out = f;
  for (std::size_t k = 0; k < out.values.size(); ++k)
    out.values[k] = f.values[k] * (1.0 - dt * st.loss_rate[k]) + dt * st.gain[k];
  return out;
}

inline DistributionField scattering_apply(const DistributionField& f, const KernelSpec& spec, const FieldSet& fs,
                                          double dt) {
  return scattering_apply(f, kernel_tables(spec, fs), dt);
}

// ---------------------------------------------------------------------------
// Kernel mixed norms.

/// || T ||_{L^p1_x L^p2_v L^p3_v'} (v' innermost, then v, then x).
inline double kernel_mixed_norm(const KernelTables& kt, double p1, double p2, double p3) {
  check_exponent(p1, "p1");
  check_exponent(p2, "p2");
  check_exponent(p3, "p3");
  if (!(p1 >= p2 && p1 >= p3)) throw InvalidArgument("kernel mixed norm needs p1 >= p2 and p1 >= p3");
  const auto& g = *kt.grid;
  const std::size_t n = g.n_space(), nv = g.n_velocity();
  const double w = g.velocity_weight();
  std::vector<double> outer(n), mid(nv), inner(nv);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < nv; ++j) {
      for (std::size_t jp = 0; jp < nv; ++jp) inner[jp] = kt.value(i, j, jp);
      mid[j] = lp_norm(inner, w, p3);
    }
    outer[i] = lp_norm(mid, w, p2);
  }
  return lp_norm(outer, g.cell_volume(), p1);
}

/// Same exponents with x innermost: || || ||T||_{L^p1_x} ||_{L^p3_v'} ||_{L^p2_v}.
/// Minkowski: for p1 >= p2, p3 this dominates kernel_mixed_norm.
inline double kernel_mixed_norm_x_inner(const KernelTables& kt, double p1, double p2, double p3) {
  const auto& g = *kt.grid;
  const std::size_t n = g.n_space(), nv = g.n_velocity();
  const double w = g.velocity_weight();
  std::vector<double> col(n), mid(nv), outer(nv);
  for (std::size_t j = 0; j < nv; ++j) {
    for (std::size_t jp = 0; jp < nv; ++jp) {
      for (std::size_t i = 0; i < n; ++i) col[i] = kt.value(i, j, jp);
      mid[jp] = lp_norm(col, g.cell_volume(), p1);
    }
    outer[j] = lp_norm(mid, w, p3);
  }
  return lp_norm(outer, w, p2);
}

struct KernelNormReport {
  double norm = 0.0;
  double S_norm = 0.0;     // ||S||_p1
  double grad_norm = 0.0;  // || |grad S| ||_p1
  double volume_factor = 0.0;  // |V|^(1/p2 + 1/p3)
  double bound = 0.0;      // C |V|^(1/p2+1/p3) (m_S ||S|| + m_grad ||grad S||)
  double ratio = 0.0;
  bool pass = false;
};

/// Evaluates the kernel norm and the Minkowski bound for a hyp3 kernel.
inline KernelNormReport kernel_norm_bound(const KernelSpec& spec, const FieldSet& fs, double p1, double p2, double p3,
                                          double slack = 0.05) {
  if (!(p1 >= p2 && p1 >= p3)) throw InvalidArgument("kernel mixed norm bound needs p1 >= p2 and p1 >= p3");
  if (spec.family != KernelFamily::hyp3) throw InvalidArgument("kernel norm bound is stated for hyp3 kernels");
  const auto kt = kernel_tables(spec, fs);
  KernelNormReport r;
  r.norm = kernel_mixed_norm(kt, p1, p2, p3);
  r.S_norm = spatial_norm(fs.S, p1);
  r.grad_norm = spatial_norm(fs.grad_magnitude(), p1);
  const auto inv = [](double p) { return std::isinf(p) ? 0.0 : 1.0 / p; };
  r.volume_factor = std::pow(fs.grid->velocity_measure(), inv(p2) + inv(p3));
  const auto [ms, mg] = hyp3_multiplicity(spec);
  r.bound = spec.C * r.volume_factor * (ms * r.S_norm + mg * r.grad_norm);
  r.ratio = r.bound > 0.0 ? r.norm / r.bound : 0.0;
  r.pass = r.norm <= (1.0 + slack) * r.bound;
  return r;
}

}  // namespace kchemo
