#pragma once

// Per-step bound monitors attached to a Simulation. Each monitor is a pure
// observer: it reads the state after every step (and once at t = 0) and keeps
// its own shadow fields. Columns named cert_* hold 1 (pass) or 0 (fail).

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "chemo_field.hpp"
#include "exponents.hpp"
#include "history.hpp"
#include "norms.hpp"
#include "simulation.hpp"

namespace kchemo {

class Monitor {
public:
  virtual ~Monitor() = default;
  virtual std::string name() const = 0;
  virtual std::vector<std::string> columns() const = 0;
  /// Called at t = 0 and after every step, in order.
  virtual std::vector<double> observe(const DistributionField& f) = 0;
  /// True when every certificate so far has passed (and any end-of-run check).
  virtual bool passed() const = 0;
  virtual std::string summary() const { return name() + (passed() ? ": pass" : ": fail"); }
};

inline bool is_cert_column(const std::string& c) { return c.rfind("cert_", 0) == 0; }

namespace detail {

// field(y + offset_sign * eps * v) for every velocity node, layout [v][x].
inline std::vector<double> shifted_per_velocity(const std::vector<double>& field, const PhaseGrid& g, double eps,
                                                int offset_sign, ShiftWorkspace& ws) {
  const std::size_t n = g.n_space();
  std::vector<double> out(n * g.n_velocity());
  for (std::size_t j = 0; j < g.n_velocity(); ++j) {
    std::array<double, 3> off{0.0, 0.0, 0.0};
    for (int a = 0; a < g.dimension(); ++a) off[a] = -offset_sign * eps * g.velocity(j)[a];
    const auto s = translated(field, g.dimension(), g.nx(), g.hx(), off, ws, false);
    std::copy(s.begin(), s.end(), out.begin() + static_cast<std::ptrdiff_t>(j * n));
  }
  return out;
}

inline double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

}  // namespace detail

// ---------------------------------------------------------------------------
// ||rho(t)||_p <= C0(t) + C int_0^t s^{-d/p'} G(t - s) ds  (hyp2, beta = 1, q = 1)

class GronwallMonitorThm2 : public Monitor {
public:
  GronwallMonitorThm2(const SimulationSpec& spec, const DistributionField& f0, double p)
      : spec_(spec), p_(p), free_(f0), ops_(f0.grid) {
    const int d = f0.grid->dimension();
    if (spec.beta != 1) throw InvalidArgument("Gronwall monitor (rho in L^p) needs beta = 1");
    if (spec.kernel.family != KernelFamily::hyp2) throw InvalidArgument("Gronwall monitor (rho in L^p) needs a hyp2 kernel");
    if (spec.kernel.saturation) throw InvalidArgument("Gronwall monitor assumes an unsaturated kernel");
    if (d < 2) throw InvalidArgument("Gronwall monitor needs d >= 2");
    if (!(p > 1.0) || std::isinf(p)) throw InvalidArgument("Gronwall monitor needs 1 < p < infinity");
    exponent_ = d * (1.0 - 1.0 / p);  // d / p'
    if (!(exponent_ < 1.0))
      throw InvalidArgument("d/p' = " + std::to_string(exponent_) + " >= 1: the time singularity is not integrable");
    mass_ = total_mass(f0);
    G_p_ = bessel_potential_norm(p, 0, d);
    dG_p_ = bessel_potential_norm(p, 1, d);
    vol_term_ = std::pow(f0.grid->velocity_measure(), 1.0 / p);
  }

  std::string name() const override { return "gronwall"; }
  std::vector<std::string> columns() const override {
    return {"term_rho_p", "bound_C0", "bound_gronwall", "cert_gronwall"};
  }

  std::vector<double> observe(const DistributionField& f) override {
    const int d = f.grid->dimension();
    if (calls_++ > 0) free_step(free_, ws_);
    const SpatialField rho = density(f);
    const double lhs = spatial_norm(rho, p_);
    const double c0 = spatial_norm(density(free_), p_);
    const auto cz = calderon_zygmund_check(rho, p_, ops_);
    c_cz_ = std::max(c_cz_, cz.max_ratio);
    rho_norms_.push_back(lhs);

    const std::size_t n = rho_norms_.size() - 1;
    if (weights_.size() < n) weights_ = history_weights(HistoryKernel::power, exponent_, f.grid->dt(), 2 * n + 16);
    const double n2 = d * (d + 1) / 2.0;
    const double M = mass_;
    std::vector<double> g(rho_norms_.size());
    for (std::size_t j = 0; j < g.size(); ++j)
      g[j] = vol_term_ * M + M * (M * G_p_ * (1.0 + n2 * c_cz_) + d * M * dG_p_ + n2 * c_cz_ * rho_norms_[j]);
    const double rhs = c0 + spec_.kernel.C * history_integral(weights_, g);
    const bool ok = lhs <= rhs;
    all_ok_ = all_ok_ && ok;
    return {lhs, c0, rhs, ok ? 1.0 : 0.0};
  }

  bool passed() const override { return all_ok_; }
  double calderon_zygmund_constant() const { return c_cz_; }

private:
  SimulationSpec spec_;
  double p_;
  double exponent_ = 0.0;
  double mass_ = 0.0, G_p_ = 0.0, dG_p_ = 0.0, vol_term_ = 0.0;
  double c_cz_ = 0.0;
  DistributionField free_;
  SpectralOps ops_;
  ShiftWorkspace ws_;
  std::vector<double> rho_norms_, weights_;
  long calls_ = 0;
  bool all_ok_ = true;
};

// ---------------------------------------------------------------------------
// f1, f2, f3 in L^p_x L^q_v (d = 3, beta = 0, hyp1):
//   f1 = int T_{t-s} [C S^s(x + v) rho] ds,  f3 = same with (grad S)^s,
//   f2 = int T_{t-s} [C int S(x - v') f(v') dv'] ds.

class TermTrackerThm1 : public Monitor {
public:
  TermTrackerThm1(const SimulationSpec& spec, const DistributionField& f0, const Rational& q, double slack = 0.10)
      : spec_(spec), slack_(slack), ops_(f0.grid) {
    if (f0.grid->dimension() != 3) throw InvalidArgument("term tracker needs d = 3");
    if (spec.beta != 0) throw InvalidArgument("term tracker needs beta = 0");
    if (spec.kernel.family != KernelFamily::hyp1) throw InvalidArgument("term tracker needs a hyp1 kernel");
    if (q <= Rational(1))
      throw InvalidArgument("term tracker needs q > 1: the f2 estimate uses HLS, which fails at q = 1");
    chain_ = solve_numerology(q.to_double());
    if (!chain_.invariants_hold) throw InvalidArgument("numerology chain fails: " + chain_.failure);
    newton_ = std::make_unique<NewtonianOperator>(ops_);
    const auto& v = chain_.values;
    p_ = v.p;
    q_ = v.q;
    lambda_ = v.lambda;
    c_conj_ = v.c / (v.c - 1.0);
    b_ = v.b;
    const auto& g = *f0.grid;
    const double qc = q_ / (q_ - 1.0);
    mass_ = total_mass(f0);
    const double vol = g.velocity_measure();
    k0_ = short_kernel_norm(g, 0, q_) * std::pow(vol, 1.0 / qc);
    k1_ = short_kernel_norm(g, 1, q_) * std::pow(vol, 1.0 / qc);
    hls_vol_ = std::pow(vol, 1.0 / p_ + v.eps_interp / qc);
    for (auto* F : {&F1_, &F2_, &F3_}) *F = DistributionField(f0.grid, 0.0);
  }

  std::string name() const override { return "term_tracker"; }
  std::vector<std::string> columns() const override {
    return {"term_f1", "bound_f1", "cert_f1", "term_f2", "bound_f2", "cert_f2", "term_f3", "bound_f3", "cert_f3"};
  }

  std::vector<double> observe(const DistributionField& f) override {
    const auto& g = *f.grid;
    const double dt = g.dt();
    std::array<std::vector<double>, 3> src = sources(f);
    if (calls_++ > 0) {
      DistributionField* Fs[3] = {&F1_, &F2_, &F3_};
      for (int k = 0; k < 3; ++k) {
        auto& F = *Fs[k];
        for (std::size_t i = 0; i < F.values.size(); ++i) F.values[i] += 0.5 * dt * prev_[k][i];
        free_step(F, ws_);
        for (std::size_t i = 0; i < F.values.size(); ++i) F.values[i] += 0.5 * dt * src[k][i];
      }
    }
    prev_ = std::move(src);

    norms_.push_back(mixed_norm(f, p_, q_));
    const std::size_t n = norms_.size() - 1;
    if (w_power_.size() < n) {
      w_power_ = history_weights(HistoryKernel::power, lambda_, dt, 2 * n + 16);
      w_shift_ = history_weights(HistoryKernel::shifted_power, lambda_, dt, 2 * n + 16);
    }
    const double C = spec_.kernel.C, M = mass_;
    const double h_shift = history_integral(w_shift_, norms_);
    const double h_power = history_integral(w_power_, norms_);
    const double bounds[3] = {C * k0_ * M * h_shift, C * hls_vol_ * c_hls_ * M * h_power, C * k1_ * M * h_shift};
    const double terms[3] = {mixed_norm(F1_, p_, q_), mixed_norm(F2_, p_, q_), mixed_norm(F3_, p_, q_)};
    std::vector<double> row;
    for (int k = 0; k < 3; ++k) {
      const bool ok = terms[k] <= (1.0 + slack_) * bounds[k];
      all_ok_ = all_ok_ && ok;
      row.insert(row.end(), {terms[k], bounds[k], ok ? 1.0 : 0.0});
    }
    return row;
  }

  bool passed() const override { return all_ok_; }
  const NumerologyChain& chain() const { return chain_; }
  double hls_constant() const { return c_hls_; }

private:
  // Sources at the current state; also updates the running HLS ratio.
  std::array<std::vector<double>, 3> sources(const DistributionField& f) {
    const auto& g = *f.grid;
    const std::size_t n = g.n_space(), nv = g.n_velocity();
    const double C = spec_.kernel.C, eps = spec_.kernel.epsilon, w = g.velocity_weight();
    const SpatialField rho = density(f);
    const SpatialField Ss = newton_->potential(rho, 0, KernelRange::short_range);
    const SpatialField Gs = newton_->potential(rho, 1, KernelRange::short_range);
    const SpatialField S = newton_->potential(rho, 0, KernelRange::full);
    const double rb = spatial_norm(rho, b_);
    if (rb > 0.0) c_hls_ = std::max(c_hls_, spatial_norm(S, c_conj_) / rb);

    std::array<std::vector<double>, 3> src;
    src[0] = detail::shifted_per_velocity(Ss.values, g, eps, +1, ws_);
    src[2] = detail::shifted_per_velocity(Gs.values, g, eps, +1, ws_);
    for (int k : {0, 2})
      for (std::size_t j = 0; j < nv; ++j)
        for (std::size_t i = 0; i < n; ++i) src[k][j * n + i] *= C * rho.values[i];
    const auto Sback = detail::shifted_per_velocity(S.values, g, eps, -1, ws_);
    std::vector<double> prod(n * nv), acc(n, 0.0);
    for (std::size_t k = 0; k < n * nv; ++k) prod[k] = Sback[k] * f.values[k];
    pairwise_slice_sum(prod, n, 0, nv, acc);
    src[1].resize(n * nv);
    for (std::size_t j = 0; j < nv; ++j)
      for (std::size_t i = 0; i < n; ++i) src[1][j * n + i] = C * w * acc[i];
    return src;
  }

  SimulationSpec spec_;
  double slack_;
  NumerologyChain chain_;
  double p_ = 0, q_ = 0, lambda_ = 0, c_conj_ = 0, b_ = 0;
  double mass_ = 0, k0_ = 0, k1_ = 0, hls_vol_ = 0, c_hls_ = 0;
  SpectralOps ops_;
  std::unique_ptr<NewtonianOperator> newton_;
  ShiftWorkspace ws_;
  DistributionField F1_, F2_, F3_;
  std::array<std::vector<double>, 3> prev_;
  std::vector<double> norms_, w_power_, w_shift_;
  long calls_ = 0;
  bool all_ok_ = true;
};

// ---------------------------------------------------------------------------
// X(T) = ||f||_{L^3_t L^p_x L^q_v} against X <= A + B X^2 with A the free value.

class BootstrapMonitorThm3 : public Monitor {
public:
  BootstrapMonitorThm3(const SimulationSpec& spec, const DistributionField& f0, const Rational& a,
                       double stabilization_tol = 0.02)
      : tol_(stabilization_tol), free_(f0) {
    if (f0.grid->dimension() != 3) throw InvalidArgument("bootstrap monitor needs d = 3");
    if (spec.beta != 1) throw InvalidArgument("bootstrap monitor needs beta = 1");
    if (spec.kernel.family != KernelFamily::hyp3) throw InvalidArgument("bootstrap monitor needs a hyp3 kernel");
    const auto e = theorem3_exponents(a);
    p_ = e.p.to_double();
    q_ = e.q.to_double();
    r_ = e.r.to_double();
  }

  std::string name() const override { return "bootstrap"; }
  std::vector<std::string> columns() const override { return {"term_X", "bound_X_free", "bound_B", "cert_small_branch"}; }

  std::vector<double> observe(const DistributionField& f) override {
    const double dt = f.grid->dt();
    if (calls_++ > 0) free_step(free_, ws_);
    norms_.push_back(mixed_norm(f, p_, q_));
    free_norms_.push_back(mixed_norm(free_, p_, q_));
    const double X = time_norm(norms_, r_, dt), A = time_norm(free_norms_, r_, dt);
    X_.push_back(X);
    if (X > 0.0) B_ = std::max(B_, (X - A) / (X * X));
    bool ok;
    if (B_ <= 0.0) {
      ok = X <= A * (1.0 + 1e-12);
    } else {
      const double disc = 1.0 - 4.0 * A * B_;
      ok = disc >= 0.0 && X <= (1.0 - std::sqrt(disc)) / (2.0 * B_) * (1.0 + 1e-12);
    }
    all_ok_ = all_ok_ && ok;
    return {X, A, B_, ok ? 1.0 : 0.0};
  }

  /// Relative growth of X over the final quarter of the run.
  double final_quarter_increment() const {
    if (X_.size() < 5 || X_.back() == 0.0) return 0.0;
    const std::size_t k = (3 * (X_.size() - 1)) / 4;
    return (X_.back() - X_[k]) / X_.back();
  }
  bool stabilized() const { return final_quarter_increment() < tol_; }
  double X() const { return X_.empty() ? 0.0 : X_.back(); }

  bool passed() const override { return all_ok_ && stabilized(); }
  std::string summary() const override {
    return "bootstrap: X=" + std::to_string(X()) + " B=" + std::to_string(B_) +
           " final-quarter increment=" + std::to_string(final_quarter_increment()) + (passed() ? " pass" : " fail");
  }

private:
  double tol_;
  double p_ = 0, q_ = 0, r_ = 3;
  double B_ = 0.0;
  DistributionField free_;
  ShiftWorkspace ws_;
  std::vector<double> norms_, free_norms_, X_;
  long calls_ = 0;
  bool all_ok_ = true;
};

}  // namespace kchemo
