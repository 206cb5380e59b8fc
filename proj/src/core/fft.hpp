// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>

#include "core/grid.hpp"

namespace zkls {

using Field = Eigen::MatrixXd;  // nx rows (x), n_y columns (y)
using Spectrum = Eigen::MatrixXcd;  // (nx/2+1) rows, n_y columns

// Real-to-complex transforms on one Grid1D. Plans are built with
// FFTW_ESTIMATE so results do not depend on timing.
class Fft1D {
 public:
  explicit Fft1D(int n);
  ~Fft1D();
  Fft1D(const Fft1D&) = delete;
  Fft1D& operator=(const Fft1D&) = delete;

  int size() const noexcept { return n_; }
  Eigen::VectorXcd forward(const Eigen::VectorXd& u) const;
  // Normalized so inverse(forward(u)) == u.
  Eigen::VectorXd inverse(const Eigen::VectorXcd& u_hat) const;

 private:
  int n_;
  void* fwd_;
  void* inv_;
};

class Fft2D {
 public:
  explicit Fft2D(const Grid2D& grid);
  ~Fft2D();
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  const Grid2D& grid() const noexcept { return grid_; }
  int kx_count() const noexcept { return grid_.nx() / 2 + 1; }

  Spectrum forward(const Field& u) const;
  Field inverse(const Spectrum& u_hat) const;

  // Wavenumbers for the half spectrum: k_x[p], k_y[l].
  const Eigen::VectorXd& kx() const noexcept { return kx_; }
  const Eigen::VectorXd& ky() const noexcept { return ky_; }
  // Integer y-mode index of column l, in (-n_y/2, n_y/2].
  int y_mode(int l) const noexcept;

  // Spectral derivatives of a real field.
  Field dx(const Field& u) const;
  Field dy(const Field& u) const;
  Field laplacian(const Field& u) const;
  // u(x + s, y) by phase multiplication; exact for band-limited fields.
  Field shift_x(const Field& u, double s) const;

 private:
  Grid2D grid_;
  Eigen::VectorXd kx_;
  Eigen::VectorXd ky_;
  void* fwd_;
  void* inv_;
};

// Zeroes Nyquist rows/columns and restores the Hermitian symmetry of the
// k_x = 0 column that a half-spectrum storage cannot enforce by itself.
void enforce_real_symmetry(Spectrum& u_hat);

// Discrete integrals over the cell (trapezoid rule, spectrally accurate for
// periodic integrands).
double integrate(const Field& u, const Grid2D& grid);
double inner(const Field& u, const Field& v, const Grid2D& grid);
double h1_norm_squared(const Field& u, const Fft2D& fft);

}  // namespace zkls
