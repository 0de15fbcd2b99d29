#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace kchemo {

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

/// Integral over [-1,1]^2 of (1 + u^2 + w^2)^(-power/2).
inline double unit_face_integral(double power) {
  const auto [x, w] = gauss_legendre(48);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) s += w[i] * w[j] * std::pow(1.0 + x[i] * x[i] + x[j] * x[j], -0.5 * power);
  return s;
}

/// Average of |x|^(-k), k in {1, 2}, over the cube [-h/2, h/2]^3.
///
/// The cube splits into six pyramids with apex at the origin; in each the
/// radial integral is elementary and what remains is a smooth face integral.
inline double cube_average_inverse_power(int k, double h) {
  const double a = 0.5 * h;
  const double face = unit_face_integral(k);
  const double integral = 6.0 * face * std::pow(a, 3 - k) / (3 - k);
  return integral / (h * h * h);
}

}  // namespace kchemo
