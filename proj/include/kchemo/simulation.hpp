#pragma once

// Strang-split evolution of the full system: transport dt/2, field solve from
// rho, scattering dt, transport dt/2. A wrap check against the initial mass
// runs after every step.

#include <memory>
#include <optional>

#include "chemo_field.hpp"
#include "errors.hpp"
#include "phase_grid.hpp"
#include "spectral.hpp"
#include "transport.hpp"
#include "turning.hpp"

namespace kchemo {

struct SimulationSpec {
  GridSpec grid;
  int beta = 1;
  KernelSpec kernel;
  bool wrap_check = true;
};

inline void validate(const SimulationSpec& s) {
  PhaseGrid::validate(s.grid);
  if (s.beta != 0 && s.beta != 1) throw InvalidArgument("beta must be 0 or 1");
  if (s.beta == 0 && s.grid.dimension != 3)
    throw InvalidArgument("beta = 0 is supported in d = 3 only (Newtonian fields), got d = " +
                          std::to_string(s.grid.dimension));
  if (s.beta == 0 && s.kernel.family == KernelFamily::hyp2)
    throw InvalidArgument("hyp2 needs second derivatives of S, available for beta = 1 only");
  if (s.kernel.saturation && !(*s.kernel.saturation > 0.0)) throw InvalidArgument("saturation must be positive");
}

/// Fields a kernel family needs, computed from rho.
class FieldSolver {
public:
  FieldSolver(GridPtr grid, int beta) : ops_(std::make_unique<SpectralOps>(grid)), beta_(beta) {
    if (beta == 0) newton_ = std::make_unique<NewtonianOperator>(*ops_);
  }

  FieldSet solve(const SpatialField& rho, KernelFamily family) {
    if (beta_ == 0) return newtonian_fields(rho, *newton_);
    FieldSolveSpec spec;
    spec.beta = 1;
    spec.want_grad = true;
    spec.want_hess = family == KernelFamily::hyp2;
    return solve_field(rho, spec, *ops_);
  }

  SpectralOps& ops() { return *ops_; }
  NewtonianOperator& newton() {
    if (!newton_) newton_ = std::make_unique<NewtonianOperator>(*ops_);
    return *newton_;
  }

private:
  std::unique_ptr<SpectralOps> ops_;
  std::unique_ptr<NewtonianOperator> newton_;
  int beta_;
};

class Simulation {
public:
  Simulation(const SimulationSpec& spec, DistributionField f0) : spec_(spec), f_(std::move(f0)) {
    validate(spec);
    if (!f_.grid) throw InvalidArgument("initial field has no grid");
    grid_ = f_.grid;
    initial_mass_ = total_mass(f_);
    if (spec.kernel.family != KernelFamily::constant) solver_.emplace(grid_, spec.beta);
  }

  Simulation(const SimulationSpec& spec, const InitialData& init)
      : Simulation(spec, sample_initial(build_grid(spec.grid), init)) {}

  /// One Strang step of length dt.
  void step() {
    const double dt = grid_->dt();
    f_ = transport_step(f_, 0.5 * dt, ws_);
    KernelFields kf;
    if (solver_) {
      kf = kernel_fields(spec_.kernel, solver_->solve(density(f_), spec_.kernel.family));
    } else {
      kf.grid = grid_;
    }
    const KernelTables kt = kernel_tables(spec_.kernel, kf, ws_);
    const double t = f_.time;
    f_ = scattering_apply(f_, kt, dt);
    f_.time = t;
    f_ = transport_step(f_, 0.5 * dt, ws_);
    ++steps_;
    if (spec_.wrap_check) check_wrap(f_, initial_mass_);
  }

  const DistributionField& state() const { return f_; }
  const GridPtr& grid() const { return grid_; }
  const SimulationSpec& spec() const { return spec_; }
  double initial_mass() const { return initial_mass_; }
  long steps() const { return steps_; }
  double time() const { return f_.time; }

private:
  SimulationSpec spec_;
  DistributionField f_;
  GridPtr grid_;
  double initial_mass_ = 0.0;
  long steps_ = 0;
  std::optional<FieldSolver> solver_;
  ShiftWorkspace ws_;
};

/// Free evolution with the same half-step transport as Simulation::step.
inline void free_step(DistributionField& f, ShiftWorkspace& ws) {
  const double dt = f.grid->dt();
  f = transport_step(f, 0.5 * dt, ws);
  f = transport_step(f, 0.5 * dt, ws);
}

}  // namespace kchemo
