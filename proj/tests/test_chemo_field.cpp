#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kchemo/chemo_field.hpp"

using namespace kchemo;

namespace {

GridPtr grid(int d, int nx, double L) {
  GridSpec s;
  s.dimension = d;
  s.box_half_length = L;
  s.nx = nx;
  s.nv = 4;
  return build_grid(s);
}

SpatialField bump(const GridPtr& g, Vec3 c, double w, double amp = 1.0) {
  SpatialField r(g, FieldTag::rho);
  for (std::size_t i = 0; i < g->n_space(); ++i) {
    const auto x = g->position(i);
    double r2 = 0.0;
    for (int k = 0; k < g->dimension(); ++k) r2 += (x[k] - c[k]) * (x[k] - c[k]);
    r.values[i] = amp * std::exp(-r2 / (2 * w * w));
  }
  return r;
}

SpatialField band_limited(const GridPtr& g, std::mt19937_64& rng, int kmax = 3) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SpatialField r(g, FieldTag::rho);
  const double k0 = std::numbers::pi / g->box_half_length();
  for (int m = 0; m < 6; ++m) {
    std::array<int, 3> k{0, 0, 0};
    for (int a = 0; a < g->dimension(); ++a) k[a] = static_cast<int>(std::lround(u(rng) * kmax));
    const double amp = u(rng), ph = 3.0 * u(rng);
    for (std::size_t i = 0; i < g->n_space(); ++i) {
      const auto x = g->position(i);
      r.values[i] += amp * std::cos(k0 * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]) + ph);
    }
  }
  for (double& v : r.values) v += 7.0;
  return r;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(SolveField, ManufacturedCosine) {
  for (int beta : {0, 1}) {
    auto g = grid(2, 32, 4.0);
    SpectralOps ops(g);
    const double k0 = std::numbers::pi / 4.0;
    const double kx = 2 * k0, ky = 3 * k0;
    SpatialField rho(g, FieldTag::rho);
    for (std::size_t i = 0; i < g->n_space(); ++i) {
      const auto x = g->position(i);
      rho.values[i] = (beta + kx * kx + ky * ky) * std::cos(kx * x[0] + ky * x[1]);
    }
    FieldSolveSpec spec;
    spec.beta = beta;
    spec.want_hess = true;
    const auto fs = solve_field(rho, spec, ops);
    for (std::size_t i = 0; i < g->n_space(); ++i) {
      const auto x = g->position(i);
      const double ph = kx * x[0] + ky * x[1];
      EXPECT_NEAR(fs.S.values[i], std::cos(ph), 1e-10);
      EXPECT_NEAR(fs.grad[0].values[i], -kx * std::sin(ph), 1e-10);
      EXPECT_NEAR(fs.second(0, 1).values[i], -kx * ky * std::cos(ph), 1e-10);
    }
  }
}

TEST(SolveField, ConstantRho) {
  auto g = grid(2, 16, 4.0);
  SpectralOps ops(g);
  SpatialField rho(g, std::vector<double>(g->n_space(), 2.5), FieldTag::rho);
  const auto fs = solve_field(rho, {}, ops);
  for (double s : fs.S.values) EXPECT_NEAR(s, 2.5, 1e-13);
}

TEST(SolveField, ResidualAndLinearity) {
  std::mt19937_64 rng(7);
  auto g = grid(2, 32, 4.0);
  SpectralOps ops(g);
  const auto r1 = band_limited(g, rng), r2 = band_limited(g, rng);
  FieldSolveSpec spec;
  spec.want_hess = true;
  const auto f1 = solve_field(r1, spec, ops);
  std::vector<double> res(g->n_space());
  for (std::size_t i = 0; i < res.size(); ++i)
    res[i] = f1.S.values[i] - f1.second(0, 0).values[i] - f1.second(1, 1).values[i] - r1.values[i];
  EXPECT_LE(max_abs(res) / max_abs(r1.values), 1e-10);

  SpatialField comb(g, FieldTag::rho);
  for (std::size_t i = 0; i < res.size(); ++i) comb.values[i] = 2.0 * r1.values[i] - 0.5 * r2.values[i];
  const auto f2 = solve_field(r2, spec, ops);
  const auto fc = solve_field(comb, spec, ops);
  for (std::size_t i = 0; i < res.size(); ++i)
    EXPECT_NEAR(fc.S.values[i], 2.0 * f1.S.values[i] - 0.5 * f2.S.values[i], 1e-12 * max_abs(fc.S.values));
}

TEST(SolveField, PositiveForPositiveRho) {
  auto g = grid(3, 16, 4.0);
  SpectralOps ops(g);
  const auto fs = solve_field(bump(g, {0.5, 0, 0}, 0.4), {}, ops);
  for (double s : fs.S.values) EXPECT_GE(s, 0.0);
}

TEST(SolveField, BetaZeroNeedsProjection) {
  auto g = grid(2, 16, 4.0);
  SpectralOps ops(g);
  FieldSolveSpec spec;
  spec.beta = 0;
  spec.project_zero_mode = false;
  const auto rho = bump(g, {0, 0, 0}, 0.5);
  EXPECT_THROW(solve_field(rho, spec, ops), InvalidArgument);
  spec.project_zero_mode = true;
  const auto fs = solve_field(rho, spec, ops);
  EXPECT_NEAR(fs.removed_mean, integrate(rho) / 64.0, 1e-12);
  spec.beta = 2;
  EXPECT_THROW(solve_field(rho, spec, ops), InvalidArgument);
}

TEST(Split, PartsReconstructFullPotential) {
  auto g = grid(3, 32, 4.0);
  SpectralOps ops(g);
  NewtonianOperator op(ops);
  const auto rho = bump(g, {0, 0, 0}, 0.3);
  for (int order : {0, 1}) {
    const auto [s, l] = split_short_long(rho, order, op);
    const auto full = op.potential(rho, order, KernelRange::full);
    for (std::size_t i = 0; i < full.values.size(); ++i)
      EXPECT_NEAR(s.values[i] + l.values[i], full.values[i], 1e-8 * max_abs(full.values));
  }
}

TEST(Split, LongPartFarFieldAndBound) {
  auto g = grid(3, 32, 4.0);
  SpectralOps ops(g);
  NewtonianOperator op(ops);
  const auto rho = bump(g, {0, 0, 0}, 0.15);
  const double M = integrate(rho);
  const auto [s, l] = split_short_long(rho, 0, op);
  for (std::size_t i = 0; i < g->n_space(); ++i) {
    const auto x = g->position(i);
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (r >= 1.5 && r <= 3.0) {
      EXPECT_NEAR(l.values[i] * 4 * std::numbers::pi * r / M, 1.0, 0.03);
    }
  }
  EXPECT_LE(max_abs(l.values), M / (4 * std::numbers::pi) * (1 + 1e-6));
  const auto [gs, gl] = split_short_long(rho, 1, op);
  EXPECT_LE(max_abs(gl.values), M / (4 * std::numbers::pi) * (1 + 1e-6));
}

TEST(Split, ZeroAndDimensionChecks) {
  auto g = grid(3, 16, 4.0);
  SpectralOps ops(g);
  const auto [s, l] = split_short_long(SpatialField(g, FieldTag::rho), 0, ops);
  EXPECT_EQ(max_abs(s.values), 0.0);
  EXPECT_EQ(max_abs(l.values), 0.0);
  auto g2 = grid(2, 16, 4.0);
  SpectralOps ops2(g2);
  EXPECT_THROW(split_short_long(SpatialField(g2, FieldTag::rho), 0, ops2), InvalidArgument);
  auto small = grid(3, 16, 1.5);
  SpectralOps ops3(small);
  EXPECT_THROW(NewtonianOperator{ops3}, InvalidArgument);
}

TEST(Split, OriginCellAverage) {
  // Average of 1/|x| over a cube of side h is 1.190038...*2/h... compare with brute midpoint sum.
  const double h = 0.3;
  double s = 0.0;
  const int n = 200;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double x = (i + 0.5) / n - 0.5, y = (j + 0.5) / n - 0.5, z = (k + 0.5) / n - 0.5;
        s += 1.0 / (h * std::sqrt(x * x + y * y + z * z));
      }
  EXPECT_NEAR(cube_average_inverse_power(1, h) / (s / (n * n * n)), 1.0, 1e-3);
}

TEST(Bessel, ClosedForms) {
  const BesselPotential g3(3), g1(1), g2(2);
  for (double r : {0.01, 0.3, 1.0, 4.0, 15.0}) {
    EXPECT_NEAR(g3.value(r) / (std::exp(-r) / (4 * std::numbers::pi * r)), 1.0, 1e-8);
    EXPECT_NEAR(g3.gradient_magnitude(r) / (std::exp(-r) * (1 + r) / (4 * std::numbers::pi * r * r)), 1.0, 1e-8);
    EXPECT_NEAR(g1.value(r) / (0.5 * std::exp(-r)), 1.0, 1e-8);
    EXPECT_NEAR(g2.value(r) / (std::cyl_bessel_k(0.0, r) / (2 * std::numbers::pi)), 1.0, 1e-8);
    EXPECT_NEAR(g2.gradient_magnitude(r) / (std::cyl_bessel_k(1.0, r) / (2 * std::numbers::pi)), 1.0, 1e-8);
  }
}

TEST(Bessel, NormThresholdsAndRefinement) {
  EXPECT_THROW(bessel_potential_norm(1.5, 1, 3), InvalidArgument);
  EXPECT_THROW(bessel_potential_norm(3.0, 0, 3), InvalidArgument);
  for (auto [p, order] : {std::pair{1.2, 1}, {2.9, 0}, {1.0, 0}}) {
    const double a = bessel_potential_norm(p, order, 3, 200);
    const double b = bessel_potential_norm(p, order, 3, 400);
    EXPECT_TRUE(std::isfinite(a) && a > 0);
    EXPECT_LT(std::abs(a / b - 1), 0.005);
  }
  // ||G||_1 = 1 in every dimension (G^(0) = 1).
  for (int d : {1, 2, 3}) EXPECT_NEAR(bessel_potential_norm(1.0, 0, d), 1.0, 1e-4);
  // d=3: ||grad G||_1 = int_0^inf e^{-r}(1+r) dr = 2.
  EXPECT_NEAR(bessel_potential_norm(1.0, 1, 3), 2.0, 1e-4);
}

TEST(GradientBound, BumpsAndZero) {
  auto g = grid(3, 32, 6.0);
  SpectralOps ops(g);
  const auto one = gradient_bound_check(bump(g, {0, 0, 0}, 0.5), 1.2, ops);
  EXPECT_TRUE(one.pass) << one.ratio;
  auto two = bump(g, {-3, 0, 0}, 0.4);
  const auto other = bump(g, {3, 0, 0}, 0.4, 2.0);
  for (std::size_t i = 0; i < two.values.size(); ++i) two.values[i] += other.values[i];
  const auto r2 = gradient_bound_check(two, 1.2, ops);
  EXPECT_TRUE(r2.pass) << r2.ratio;
  EXPECT_EQ(gradient_bound_check(SpatialField(g, FieldTag::rho), 1.2, ops).ratio, 0.0);
}

TEST(CalderonZygmund, PlancherelAndStability) {
  auto g = grid(2, 64, 4.0);
  SpectralOps ops(g);
  const auto r = calderon_zygmund_check(bump(g, {0, 0, 0}, 0.5), 2.0, ops);
  EXPECT_LE(r.max_ratio, 1.0 + 1e-12);
  EXPECT_EQ(calderon_zygmund_check(SpatialField(g, FieldTag::rho), 2.0, ops).max_ratio, 0.0);

  std::mt19937_64 a(11), b(11);
  auto g128 = grid(2, 128, 4.0);
  SpectralOps ops128(g128);
  const double c64 = calderon_zygmund_check(band_limited(g, a), 4.0 / 3, ops).max_ratio;
  const double c128 = calderon_zygmund_check(band_limited(g128, b), 4.0 / 3, ops128).max_ratio;
  EXPECT_LT(std::abs(c64 / c128 - 1), 0.05);
  EXPECT_THROW(calderon_zygmund_check(SpatialField(g, FieldTag::rho), 1.0, ops), InvalidArgument);
}
