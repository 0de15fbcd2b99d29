#pragma once

// Periodic translation of grid data by an arbitrary displacement.
//
// Each axis is handled by a conservative flux-form cubic pass (the positive
// flux-conservative scheme of Filbet, Sonnendrucker and Bertrand). Without the
// limiter the pass is exactly 4-point cubic Lagrange interpolation at
// x - a; the limiter only acts where a cell would otherwise go negative.
// Sum of values is conserved to round-off and non-negative data stays
// non-negative.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace kchemo {

namespace detail {

/// Shift displacement in cells below this distance from an integer counts as integral.
inline constexpr double kIntegerSnap = 1e-9;

inline double limiter_up(double fi, double diff) {
  // Slope towards a larger neighbour: keep outgoing flux within the donor cell.
  if (diff > 0.0) return std::min(1.0, 2.0 * fi / diff);
  return 1.0;
}

inline double limiter_down(double fi, double diff) {
  if (diff < 0.0) return std::min(1.0, -2.0 * fi / diff);
  return 1.0;
}

/// out[i] = value of the line translated right by alpha cells, 0 <= alpha < 1.
inline void pfc_fraction(std::span<const double> in, double alpha, std::span<double> out,
                         std::vector<double>& flux, bool limit) {
  const std::size_t n = in.size();
  flux.resize(n);
  const double a1 = (1.0 - alpha) * (2.0 - alpha) / 6.0;
  const double a2 = (1.0 - alpha) * (1.0 + alpha) / 6.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fm = in[i == 0 ? n - 1 : i - 1];
    const double f0 = in[i];
    const double fp = in[i + 1 == n ? 0 : i + 1];
    const double dp = fp - f0;
    const double dm = f0 - fm;
    const double ep = limit ? limiter_up(f0, dp) : 1.0;
    const double em = limit ? limiter_down(f0, dm) : 1.0;
    // flux[i]: mass leaving cell i through its right face.
    flux[i] = alpha * (f0 + ep * a1 * dp + em * a2 * dm);
  }
  out[0] = in[0] - flux[0] + flux[n - 1];
  for (std::size_t i = 1; i < n; ++i) out[i] = in[i] - flux[i] + flux[i - 1];
}

}  // namespace detail

/// Translate a periodic 1-D line by `cells` grid cells: out[i] ~ in(i - cells).
inline void shift_line(std::span<const double> in, double cells, std::span<double> out,
                       std::vector<double>& scratch, std::vector<double>& flux, bool limit = true) {
  const std::size_t n = in.size();
  const auto nn = static_cast<long long>(n);
  double whole = std::floor(cells);
  double alpha = cells - whole;
  if (alpha < detail::kIntegerSnap) alpha = 0.0;
  if (1.0 - alpha < detail::kIntegerSnap) {
    alpha = 0.0;
    whole += 1.0;
  }
  long long roll = static_cast<long long>(whole) % nn;
  if (roll < 0) roll += nn;
  const auto r = static_cast<std::ptrdiff_t>(roll);
  if (alpha == 0.0) {
    std::rotate_copy(in.begin(), in.end() - r, in.end(), out.begin());
    return;
  }
  scratch.resize(n);
  detail::pfc_fraction(in, alpha, scratch, flux, limit);
  std::rotate_copy(scratch.begin(), scratch.end() - r, scratch.end(), out.begin());
}

/// Workspace reused across shifts so hot loops do not allocate.
struct ShiftWorkspace {
  std::vector<double> line, shifted, scratch, flux, buffer;
};

namespace detail {

// Split a displacement into a whole roll (mod n) and a fraction in [0, 1).
inline std::pair<std::size_t, double> split_cells(double cells, std::size_t n) {
  double whole = std::floor(cells);
  double alpha = cells - whole;
  if (alpha < kIntegerSnap) alpha = 0.0;
  if (1.0 - alpha < kIntegerSnap) {
    alpha = 0.0;
    whole += 1.0;
  }
  const auto nn = static_cast<long long>(n);
  long long roll = static_cast<long long>(whole) % nn;
  if (roll < 0) roll += nn;
  return {static_cast<std::size_t>(roll), alpha};
}

// Same arithmetic as pfc_fraction + roll, applied to n rows of `width`
// contiguous values (rows `width` apart), so the inner loops vectorise.
inline void shift_rows(double* block, std::size_t n, std::size_t width, double cells, ShiftWorkspace& ws,
                       bool limit) {
  const auto [roll, alpha] = split_cells(cells, n);
  ws.buffer.resize(n * width);
  double* out = ws.buffer.data();
  if (alpha == 0.0) {
    for (std::size_t i = 0; i < n; ++i) std::copy(block + i * width, block + (i + 1) * width, out + ((i + roll) % n) * width);
    std::copy(out, out + n * width, block);
    return;
  }
  ws.flux.resize(n * width);
  double* flux = ws.flux.data();
  const double a1 = (1.0 - alpha) * (2.0 - alpha) / 6.0;
  const double a2 = (1.0 - alpha) * (1.0 + alpha) / 6.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* rm = block + (i == 0 ? n - 1 : i - 1) * width;
    const double* r0 = block + i * width;
    const double* rp = block + (i + 1 == n ? 0 : i + 1) * width;
    double* fl = flux + i * width;
    if (limit) {
      for (std::size_t s = 0; s < width; ++s) {
        const double dp = rp[s] - r0[s];
        const double dm = r0[s] - rm[s];
        const double ep = limiter_up(r0[s], dp);
        const double em = limiter_down(r0[s], dm);
        fl[s] = alpha * (r0[s] + ep * a1 * dp + em * a2 * dm);
      }
    } else {
      for (std::size_t s = 0; s < width; ++s) {
        const double dp = rp[s] - r0[s];
        const double dm = r0[s] - rm[s];
        fl[s] = alpha * (r0[s] + 1.0 * a1 * dp + 1.0 * a2 * dm);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double* r0 = block + i * width;
    const double* fi = flux + i * width;
    const double* fm = flux + (i == 0 ? n - 1 : i - 1) * width;
    double* o = out + ((i + roll) % n) * width;
    for (std::size_t s = 0; s < width; ++s) o[s] = r0[s] - fi[s] + fm[s];
  }
  std::copy(out, out + n * width, block);
}

}  // namespace detail

/// In-place periodic translation of a d-dimensional array (nx per axis, axis 0
/// slowest) by `cells[k]` grid cells along each axis.
inline void shift_field(std::span<double> data, int dimension, int nx, const std::array<double, 3>& cells,
                        ShiftWorkspace& ws, bool limit = true) {
  const auto n = static_cast<std::size_t>(nx);
  for (int axis = 0; axis < dimension; ++axis) {
    const double c = cells[axis];
    if (c == 0.0) continue;
    std::size_t stride = 1;
    for (int k = axis + 1; k < dimension; ++k) stride *= n;
    const std::size_t outer = data.size() / (stride * n);
    if (stride > 1) {
      for (std::size_t o = 0; o < outer; ++o) detail::shift_rows(data.data() + o * stride * n, n, stride, c, ws, limit);
      continue;
    }
    ws.line.resize(n);
    ws.shifted.resize(n);
    for (std::size_t o = 0; o < outer; ++o) {
      double* base = data.data() + o * n;
      std::copy(base, base + n, ws.line.begin());
      shift_line(ws.line, c, ws.shifted, ws.scratch, ws.flux, limit);
      std::copy(ws.shifted.begin(), ws.shifted.end(), base);
    }
  }
}

/// Copying variant: returns `data` translated by the physical displacement
/// `offset` (so result(x) ~ data(x - offset)).
inline std::vector<double> translated(std::span<const double> data, int dimension, int nx, double hx,
                                      const std::array<double, 3>& offset, ShiftWorkspace& ws, bool limit = true) {
  std::vector<double> out(data.begin(), data.end());
  std::array<double, 3> cells{0.0, 0.0, 0.0};
  for (int k = 0; k < dimension; ++k) cells[k] = offset[k] / hx;
  shift_field(out, dimension, nx, cells, ws, limit);
  return out;
}

}  // namespace kchemo
