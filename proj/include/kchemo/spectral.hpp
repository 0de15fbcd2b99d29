#pragma once

// Thin RAII wrapper around FFTW real-to-complex transforms on the periodic
// position grid.

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "phase_grid.hpp"

namespace kchemo {

class SpectralOps {
public:
  explicit SpectralOps(GridPtr grid) : grid_(std::move(grid)) {
    const int d = grid_->dimension();
    const int n = grid_->nx();
    n_real_ = grid_->n_space();
    n_complex_ = n_real_ / static_cast<std::size_t>(n) * static_cast<std::size_t>(n / 2 + 1);
    real_ = fftw_alloc_real(n_real_);
    cplx_ = fftw_alloc_complex(n_complex_);
    int dims[3] = {n, n, n};
    forward_ = fftw_plan_dft_r2c(d, dims, real_, cplx_, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r(d, dims, cplx_, real_, FFTW_ESTIMATE);
  }
  SpectralOps(const SpectralOps&) = delete;
  SpectralOps& operator=(const SpectralOps&) = delete;
  ~SpectralOps() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
    fftw_free(real_);
    fftw_free(cplx_);
  }

  const GridPtr& grid() const { return grid_; }
  std::size_t n_complex() const { return n_complex_; }

  std::vector<std::complex<double>> forward(std::span<const double> in) {
    std::copy(in.begin(), in.end(), real_);
    fftw_execute(forward_);
    std::vector<std::complex<double>> out(n_complex_);
    for (std::size_t i = 0; i < n_complex_; ++i) out[i] = {cplx_[i][0], cplx_[i][1]};
    return out;
  }

  /// Normalised inverse: inverse(forward(x)) == x.
  std::vector<double> inverse(std::span<const std::complex<double>> in) {
    for (std::size_t i = 0; i < n_complex_; ++i) {
      cplx_[i][0] = in[i].real();
      cplx_[i][1] = in[i].imag();
    }
    fftw_execute(inverse_);
    std::vector<double> out(real_, real_ + n_real_);
    const double scale = 1.0 / static_cast<double>(n_real_);
    for (double& v : out) v *= scale;
    return out;
  }

  /// Calls fn(index, k, nyquist_mask) for every stored spectral coefficient.
  /// k holds wavenumbers per axis; nyquist_mask bit a is set when axis a sits
  /// on its Nyquist mode.
  template <class Fn>
  void for_each_mode(Fn&& fn) const {
    const int d = grid_->dimension();
    const int n = grid_->nx();
    const int last = n / 2 + 1;
    const auto wn = grid_->wavenumbers();
    const double k0 = wn.size() > 1 ? wn[1] : 0.0;
    std::array<int, 3> idx{0, 0, 0};
    for (std::size_t c = 0; c < n_complex_; ++c) {
      std::size_t rem = c;
      idx[d - 1] = static_cast<int>(rem % last);
      rem /= last;
      for (int a = d - 2; a >= 0; --a) {
        idx[a] = static_cast<int>(rem % n);
        rem /= n;
      }
      std::array<double, 3> k{0.0, 0.0, 0.0};
      unsigned nyq = 0;
      for (int a = 0; a < d; ++a) {
        if (a == d - 1) {
          k[a] = k0 * idx[a];
          if (idx[a] == n / 2) {
            nyq |= 1u << a;
            k[a] = -k0 * idx[a];
          }
        } else {
          k[a] = wn[idx[a]];
          if (idx[a] == n / 2) nyq |= 1u << a;
        }
      }
      fn(c, k, nyq);
    }
  }

private:
  GridPtr grid_;
  std::size_t n_real_ = 0;
  std::size_t n_complex_ = 0;
  double* real_ = nullptr;
  fftw_complex* cplx_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

}  // namespace kchemo
