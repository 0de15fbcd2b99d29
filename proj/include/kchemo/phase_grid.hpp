#pragma once

// Discrete phase space: periodic position box [-L, L)^d times a bounded
// velocity set V (ball or spherical shell) sampled on the cube [-R, R]^d.

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "reduce.hpp"

namespace kchemo {

enum class VelocityShape { ball, shell };

struct GridSpec {
  int dimension = 1;
  double box_half_length = 1.0;
  int nx = 64;
  VelocityShape velocity_shape = VelocityShape::ball;
  double r_min = 0.0;
  double r_max = 1.0;
  int nv = 16;
  double dt = 0.01;
};

using Vec3 = std::array<double, 3>;

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

class PhaseGrid {
public:
  explicit PhaseGrid(const GridSpec& spec) : spec_(spec) {
    validate(spec);
    const int d = spec.dimension;
    hx_ = 2.0 * spec.box_half_length / spec.nx;
    n_space_ = 1;
    for (int k = 0; k < d; ++k) n_space_ *= static_cast<std::size_t>(spec.nx);
    cell_volume_ = std::pow(hx_, d);

    axis_.resize(spec.nx);
    for (int i = 0; i < spec.nx; ++i) axis_[i] = -spec.box_half_length + i * hx_;

    wavenumbers_.resize(spec.nx);
    const double k0 = std::numbers::pi / spec.box_half_length;
    for (int i = 0; i < spec.nx; ++i) {
      const int m = (i < spec.nx / 2) ? i : i - spec.nx;
      wavenumbers_[i] = k0 * m;
    }

    hv_ = 2.0 * spec.r_max / spec.nv;
    velocity_weight_ = std::pow(hv_, d);
    std::size_t cube = 1;
    for (int k = 0; k < d; ++k) cube *= static_cast<std::size_t>(spec.nv);
    cube_mask_.assign(cube, 0);
    for (std::size_t c = 0; c < cube; ++c) {
      Vec3 v{0.0, 0.0, 0.0};
      std::size_t rem = c;
      for (int k = d - 1; k >= 0; --k) {
        const auto j = static_cast<int>(rem % spec.nv);
        rem /= spec.nv;
        v[k] = -spec.r_max + (j + 0.5) * hv_;
      }
      if (in_velocity_set(v)) {
        cube_mask_[c] = 1;
        velocities_.push_back(v);
        cube_index_.push_back(c);
      }
    }
    if (velocities_.empty()) throw InvalidArgument("velocity set contains no grid nodes; increase nv");
    std::vector<double> w(velocities_.size(), velocity_weight_);
    velocity_measure_ = pairwise_sum(w);
  }

  static void validate(const GridSpec& s) {
    if (s.dimension < 1 || s.dimension > 3)
      throw InvalidArgument("dimension must be 1, 2 or 3, got " + std::to_string(s.dimension));
    if (!(s.box_half_length > 0.0)) throw InvalidArgument("box half-length must be positive");
    if (!is_power_of_two(s.nx)) throw InvalidArgument("nx must be a power of two, got " + std::to_string(s.nx));
    if (s.nv < 2 || s.nv % 2 != 0) throw InvalidArgument("nv must be even and >= 2, got " + std::to_string(s.nv));
    if (!(s.dt > 0.0)) throw InvalidArgument("dt must be positive");
    if (!(s.r_max > 0.0)) throw InvalidArgument("r_max must be positive");
    if (s.r_min < 0.0) throw InvalidArgument("r_min must be non-negative");
    if (!(s.r_min < s.r_max)) throw InvalidArgument("r_min must be smaller than r_max");
    if (s.velocity_shape == VelocityShape::ball && s.r_min != 0.0)
      throw InvalidArgument("ball velocity set requires r_min = 0");
  }

  const GridSpec& spec() const { return spec_; }
  int dimension() const { return spec_.dimension; }
  int nx() const { return spec_.nx; }
  double hx() const { return hx_; }
  double box_half_length() const { return spec_.box_half_length; }
  double cell_volume() const { return cell_volume_; }
  std::size_t n_space() const { return n_space_; }
  double dt() const { return spec_.dt; }

  double hv() const { return hv_; }
  double velocity_weight() const { return velocity_weight_; }
  std::size_t n_velocity() const { return velocities_.size(); }
  std::size_t n_phase() const { return n_space_ * velocities_.size(); }
  const Vec3& velocity(std::size_t j) const { return velocities_[j]; }
  std::span<const Vec3> velocities() const { return velocities_; }
  /// Quadrature measure of V: sum of velocity weights.
  double velocity_measure() const { return velocity_measure_; }
  double max_speed() const { return spec_.r_max; }

  std::span<const double> axis() const { return axis_; }
  std::span<const double> wavenumbers() const { return wavenumbers_; }
  std::span<const unsigned char> cube_mask() const { return cube_mask_; }
  std::span<const std::size_t> cube_index() const { return cube_index_; }

  bool in_velocity_set(const Vec3& v) const {
    double r2 = 0.0;
    for (int k = 0; k < spec_.dimension; ++k) r2 += v[k] * v[k];
    const double hi = spec_.r_max * spec_.r_max * (1.0 + 1e-12);
    const double lo = spec_.r_min * spec_.r_min * (1.0 - 1e-12);
    return r2 <= hi && r2 >= lo;
  }

  /// Multi-index of flat spatial index (axis 0 slowest).
  std::array<int, 3> space_index(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int k = spec_.dimension - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(flat % spec_.nx);
      flat /= spec_.nx;
    }
    return idx;
  }

  std::size_t flat_space_index(const std::array<int, 3>& idx) const {
    std::size_t flat = 0;
    for (int k = 0; k < spec_.dimension; ++k) {
      const int i = ((idx[k] % spec_.nx) + spec_.nx) % spec_.nx;
      flat = flat * spec_.nx + static_cast<std::size_t>(i);
    }
    return flat;
  }

  Vec3 position(std::size_t flat) const {
    const auto idx = space_index(flat);
    Vec3 x{0.0, 0.0, 0.0};
    for (int k = 0; k < spec_.dimension; ++k) x[k] = axis_[idx[k]];
    return x;
  }

  /// Zero every entry of a full velocity-cube array that lies outside V.
  void apply_velocity_mask(std::span<double> cube_values) const {
    if (cube_values.size() != cube_mask_.size()) throw InvalidArgument("cube array has the wrong size");
    for (std::size_t c = 0; c < cube_values.size(); ++c)
      if (!cube_mask_[c]) cube_values[c] = 0.0;
  }

private:
  GridSpec spec_;
  double hx_ = 0.0;
  double cell_volume_ = 0.0;
  std::size_t n_space_ = 0;
  double hv_ = 0.0;
  double velocity_weight_ = 0.0;
  double velocity_measure_ = 0.0;
  std::vector<double> axis_;
  std::vector<double> wavenumbers_;
  std::vector<Vec3> velocities_;
  std::vector<std::size_t> cube_index_;
  std::vector<unsigned char> cube_mask_;
};

using GridPtr = std::shared_ptr<const PhaseGrid>;

inline GridPtr build_grid(const GridSpec& spec) { return std::make_shared<const PhaseGrid>(spec); }

/// Cell density f(x_i, v_j) on the active velocity nodes; layout [v][x].
struct DistributionField {
  GridPtr grid;
  std::vector<double> values;
  double time = 0.0;

  DistributionField() = default;
  explicit DistributionField(GridPtr g, double t = 0.0)
      : grid(std::move(g)), values(grid->n_phase(), 0.0), time(t) {}

  std::span<double> slice(std::size_t j) { return std::span<double>(values).subspan(j * grid->n_space(), grid->n_space()); }
  std::span<const double> slice(std::size_t j) const {
    return std::span<const double>(values).subspan(j * grid->n_space(), grid->n_space());
  }
  double& at(std::size_t x, std::size_t j) { return values[j * grid->n_space() + x]; }
  double at(std::size_t x, std::size_t j) const { return values[j * grid->n_space() + x]; }
};

enum class FieldTag { rho, S, grad_S, hess_S, S_short, S_long, grad_S_short, grad_S_long, generic };

inline std::string to_string(FieldTag tag) {
  switch (tag) {
    case FieldTag::rho: return "rho";
    case FieldTag::S: return "S";
    case FieldTag::grad_S: return "gradS";
    case FieldTag::hess_S: return "hessS";
    case FieldTag::S_short: return "S_short";
    case FieldTag::S_long: return "S_long";
    case FieldTag::grad_S_short: return "gradS_short";
    case FieldTag::grad_S_long: return "gradS_long";
    case FieldTag::generic: return "field";
  }
  return "field";
}

/// Scalar field on the position grid.
struct SpatialField {
  GridPtr grid;
  std::vector<double> values;
  FieldTag tag = FieldTag::generic;

  SpatialField() = default;
  SpatialField(GridPtr g, FieldTag t) : grid(std::move(g)), values(grid->n_space(), 0.0), tag(t) {}
  SpatialField(GridPtr g, std::vector<double> v, FieldTag t) : grid(std::move(g)), values(std::move(v)), tag(t) {
    if (values.size() != grid->n_space()) throw InvalidArgument("spatial field size does not match grid");
  }
};

/// rho(x) = sum_j w_j f(x, v_j).
inline SpatialField density(const DistributionField& f) {
  const auto& g = *f.grid;
  SpatialField rho(f.grid, FieldTag::rho);
  pairwise_slice_sum(f.values, g.n_space(), 0, g.n_velocity(), rho.values);
  for (double& r : rho.values) r *= g.velocity_weight();
  return rho;
}

/// M = sum_{i,j} wx w_j f(x_i, v_j), flat pairwise reduction over the whole phase grid.
inline double total_mass(const DistributionField& f) {
  const auto& g = *f.grid;
  return g.cell_volume() * g.velocity_weight() * pairwise_sum(f.values);
}

/// x-quadrature of a spatial field.
inline double integrate(const SpatialField& s) { return s.grid->cell_volume() * pairwise_sum(s.values); }

/// Mass held in the outer `shell_cells` layers of the periodic box.
inline double boundary_mass(const DistributionField& f, int shell_cells) {
  const auto& g = *f.grid;
  const SpatialField rho = density(f);
  std::vector<double> edge;
  for (std::size_t x = 0; x < g.n_space(); ++x) {
    const auto idx = g.space_index(x);
    bool near = false;
    for (int k = 0; k < g.dimension(); ++k)
      if (idx[k] < shell_cells || idx[k] >= g.nx() - shell_cells) near = true;
    if (near) edge.push_back(rho.values[x]);
  }
  return g.cell_volume() * pairwise_sum(edge);
}

/// Throws GuardAbort when more than `fraction` of the mass sits in the boundary shell.
inline void check_wrap(const DistributionField& f, double mass, int shell_cells = 2, double fraction = 1e-6) {
  const double edge = boundary_mass(f, shell_cells);
  if (edge > fraction * mass)
    throw GuardAbort("wrap monitor: boundary-shell mass " + std::to_string(edge) + " exceeds " +
                     std::to_string(fraction) + " of total mass at t=" + std::to_string(f.time));
}

}  // namespace kchemo
