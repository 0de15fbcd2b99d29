#pragma once

// Free kinetic transport d_t f + v . grad_x f = 0.

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "phase_grid.hpp"
#include "shift.hpp"

namespace kchemo {

enum class SpatialProfile { gaussian, cube, constant };
enum class VelocityProfile { uniform, gaussian };

/// Closed-form separable initial data f0(x, v) = amplitude * g(x - center) * h(v).
///
/// g is an isotropic Gaussian exp(-|x|^2 / (2 width^2)), the indicator of the
/// cube |x_k| <= width, or 1. h is the indicator of V, or
/// exp(-|v|^2 / (2 velocity_width^2)) restricted to V. Data built from samples
/// (`sampled`) cannot be evaluated at arbitrary points.
struct InitialData {
  SpatialProfile spatial = SpatialProfile::gaussian;
  VelocityProfile velocity = VelocityProfile::uniform;
  double amplitude = 1.0;
  double width = 0.5;
  double velocity_width = 1.0;
  Vec3 center{0.0, 0.0, 0.0};
  std::optional<DistributionField> sampled;

  bool point_evaluable() const { return !sampled.has_value(); }

  double spatial_value(const Vec3& x, int d) const {
    switch (spatial) {
      case SpatialProfile::constant: return 1.0;
      case SpatialProfile::cube: {
        for (int k = 0; k < d; ++k)
          if (std::abs(x[k] - center[k]) > width) return 0.0;
        return 1.0;
      }
      case SpatialProfile::gaussian: {
        double r2 = 0.0;
        for (int k = 0; k < d; ++k) r2 += (x[k] - center[k]) * (x[k] - center[k]);
        return std::exp(-r2 / (2.0 * width * width));
      }
    }
    return 0.0;
  }

  double velocity_value(const Vec3& v, int d) const {
    if (velocity == VelocityProfile::uniform) return 1.0;
    double r2 = 0.0;
    for (int k = 0; k < d; ++k) r2 += v[k] * v[k];
    return std::exp(-r2 / (2.0 * velocity_width * velocity_width));
  }
};

/// Map a coordinate into the periodic box [-L, L).
inline double wrap_coordinate(double x, double half_length) {
  const double len = 2.0 * half_length;
  double y = std::fmod(x + half_length, len);
  if (y < 0.0) y += len;
  return y - half_length;
}

/// f(t, x, v) = f0(x - t v, v), sampled exactly on the grid (periodic wrap in x).
inline DistributionField exact_free_solution(const GridPtr& grid, const InitialData& f0, double t) {
  if (!f0.point_evaluable())
    throw InvalidArgument("exact_free_solution needs a closed-form descriptor; sampled data is not point-evaluable");
  if (t < 0.0) throw InvalidArgument("time must be non-negative");
  const auto& g = *grid;
  const int d = g.dimension();
  DistributionField f(grid, t);
  for (std::size_t j = 0; j < g.n_velocity(); ++j) {
    const Vec3& v = g.velocity(j);
    const double hv = f0.amplitude * f0.velocity_value(v, d);
    auto s = f.slice(j);
    for (std::size_t i = 0; i < g.n_space(); ++i) {
      Vec3 x = g.position(i);
      for (int k = 0; k < d; ++k) x[k] = wrap_coordinate(x[k] - t * v[k] - f0.center[k], g.box_half_length()) + f0.center[k];
      s[i] = hv * f0.spatial_value(x, d);
    }
  }
  return f;
}

inline DistributionField sample_initial(const GridPtr& grid, const InitialData& f0) {
  if (f0.sampled) return *f0.sampled;
  return exact_free_solution(grid, f0, 0.0);
}

/// Semi-Lagrangian step f_new(x, v) = f(x - dt v, v), one conservative
/// positivity-preserving cubic shift per velocity node.
inline DistributionField transport_step(const DistributionField& f, double dt, ShiftWorkspace& ws) {
  if (!(dt > 0.0)) throw InvalidArgument("transport step needs dt > 0");
  const auto& g = *f.grid;
  DistributionField out = f;
  out.time = f.time + dt;
  for (std::size_t j = 0; j < g.n_velocity(); ++j) {
    const Vec3& v = g.velocity(j);
    std::array<double, 3> cells{0.0, 0.0, 0.0};
    for (int k = 0; k < g.dimension(); ++k) cells[k] = dt * v[k] / g.hx();
    shift_field(out.slice(j), g.dimension(), g.nx(), cells, ws);
  }
  return out;
}

inline DistributionField transport_step(const DistributionField& f, double dt) {
  ShiftWorkspace ws;
  return transport_step(f, dt, ws);
}

/// Smallest positive time at which every velocity node moves an integer
/// number of cells, times m.
inline double exact_shift_time(const PhaseGrid& g, int m) { return 2.0 * m * g.hx() / g.hv(); }

}  // namespace kchemo
