#pragma once

// Convolution-in-time integrals  int_0^t K(s) a(t - s) ds  with weakly
// singular K(s) = s^-lambda or |s - 1|^-lambda on a uniform step grid. Each
// cell [s_k, s_k+1] carries the exact integral of K, multiplied by the mean of
// the two endpoint values of a.

#include <cmath>
#include <span>
#include <vector>

#include "errors.hpp"

namespace kchemo {

enum class HistoryKernel { power, shifted_power };  // s^-lambda, |s-1|^-lambda

/// Antiderivative of the kernel, continuous across s = 1.
inline double history_antiderivative(HistoryKernel k, double lambda, double s) {
  const double e = 1.0 - lambda;
  if (k == HistoryKernel::power) return std::pow(s, e) / e;
  return s < 1.0 ? -std::pow(1.0 - s, e) / e : std::pow(s - 1.0, e) / e;
}

/// Exact cell integrals of K over [k dt, (k+1) dt], k = 0 .. n-1.
inline std::vector<double> history_weights(HistoryKernel k, double lambda, double dt, std::size_t n) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw InvalidArgument("history kernel needs 0 <= lambda < 1");
  if (!(dt > 0.0)) throw InvalidArgument("history weights need dt > 0");
  std::vector<double> w(n);
  double prev = history_antiderivative(k, lambda, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double next = history_antiderivative(k, lambda, (i + 1) * dt);
    w[i] = next - prev;
    prev = next;
  }
  return w;
}

/// int_0^{t_n} K(s) a(t_n - s) ds given samples a_0 .. a_n at t_j = j dt.
inline double history_integral(std::span<const double> weights, std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  const std::size_t n = samples.size() - 1;
  if (weights.size() < n) throw InvalidArgument("history integral: not enough weights");
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += weights[k] * 0.5 * (samples[n - k] + samples[n - k - 1]);
  return acc;
}

}  // namespace kchemo
