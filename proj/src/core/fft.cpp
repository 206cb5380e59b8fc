// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "core/error.hpp"

namespace zkls {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

fftw_complex* as_fftw(std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(p);
}

}  // namespace

Fft1D::Fft1D(int n) : n_(n) {
  require(n >= 2 && n % 2 == 0, ErrorKind::InvalidArgument,
          "transform length must be even");
  Eigen::VectorXd r(n);
  Eigen::VectorXcd h(n / 2 + 1);
  std::lock_guard lock(planner_mutex());
  fwd_ = fftw_plan_dft_r2c_1d(n, r.data(), as_fftw(h.data()), kFlags);
  inv_ = fftw_plan_dft_c2r_1d(n, as_fftw(h.data()), r.data(), kFlags);
  require(fwd_ && inv_, ErrorKind::Numerical, "FFTW planning failed");
}

Fft1D::~Fft1D() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

Eigen::VectorXcd Fft1D::forward(const Eigen::VectorXd& u) const {
  require(u.size() == n_, ErrorKind::InvalidArgument, "transform size mismatch");
  Eigen::VectorXd in = u;
  Eigen::VectorXcd out(n_ / 2 + 1);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_), in.data(), as_fftw(out.data()));
  return out;
}

Eigen::VectorXd Fft1D::inverse(const Eigen::VectorXcd& u_hat) const {
  require(u_hat.size() == n_ / 2 + 1, ErrorKind::InvalidArgument,
          "transform size mismatch");
  Eigen::VectorXcd in = u_hat;
  Eigen::VectorXd out(n_);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inv_), as_fftw(in.data()), out.data());
  return out / static_cast<double>(n_);
}

Fft2D::Fft2D(const Grid2D& grid) : grid_(grid) {
  const int nx = grid.nx();
  const int ny = grid.n_y;
  kx_.resize(nx / 2 + 1);
  for (int p = 0; p <= nx / 2; ++p) kx_[p] = std::numbers::pi / grid.x.half_width * p;
  ky_.resize(ny);
  for (int l = 0; l < ny; ++l) ky_[l] = y_mode(l) / grid.L;

  Field r(nx, ny);
  Spectrum h(nx / 2 + 1, ny);
  std::lock_guard lock(planner_mutex());
  // Column-major nx-by-ny storage is a row-major [ny][nx] array.
  fwd_ = fftw_plan_dft_r2c_2d(ny, nx, r.data(), as_fftw(h.data()), kFlags);
  inv_ = fftw_plan_dft_c2r_2d(ny, nx, as_fftw(h.data()), r.data(), kFlags);
  require(fwd_ && inv_, ErrorKind::Numerical, "FFTW planning failed");
}

Fft2D::~Fft2D() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

int Fft2D::y_mode(int l) const noexcept {
  return l <= grid_.n_y / 2 ? l : l - grid_.n_y;
}

Spectrum Fft2D::forward(const Field& u) const {
  require(u.rows() == grid_.nx() && u.cols() == grid_.n_y,
          ErrorKind::InvalidArgument, "field shape does not match grid");
  Field in = u;
  Spectrum out(kx_count(), grid_.n_y);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_), in.data(), as_fftw(out.data()));
  return out;
}

Field Fft2D::inverse(const Spectrum& u_hat) const {
  require(u_hat.rows() == kx_count() && u_hat.cols() == grid_.n_y,
          ErrorKind::InvalidArgument, "spectrum shape does not match grid");
  Spectrum in = u_hat;
  Field out(grid_.nx(), grid_.n_y);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inv_), as_fftw(in.data()), out.data());
  return out / static_cast<double>(grid_.nx() * grid_.n_y);
}

Field Fft2D::dx(const Field& u) const {
  Spectrum s = forward(u);
  const std::complex<double> i(0.0, 1.0);
  for (int l = 0; l < s.cols(); ++l) {
    for (int p = 0; p < s.rows(); ++p) {
      s(p, l) *= p == grid_.nx() / 2 ? 0.0 : i * kx_[p];
    }
  }
  return inverse(s);
}

Field Fft2D::dy(const Field& u) const {
  Spectrum s = forward(u);
  const std::complex<double> i(0.0, 1.0);
  for (int l = 0; l < s.cols(); ++l) {
    const std::complex<double> f = l == grid_.n_y / 2 ? 0.0 : i * ky_[l];
    s.col(l) *= f;
  }
  return inverse(s);
}

Field Fft2D::laplacian(const Field& u) const {
  Spectrum s = forward(u);
  for (int l = 0; l < s.cols(); ++l) {
    for (int p = 0; p < s.rows(); ++p) {
      s(p, l) *= -(kx_[p] * kx_[p] + ky_[l] * ky_[l]);
    }
  }
  return inverse(s);
}

Field Fft2D::shift_x(const Field& u, double shift) const {
  Spectrum s = forward(u);
  for (int p = 0; p < s.rows(); ++p) {
    const double phase = kx_[p] * shift;
    if (p == grid_.nx() / 2) {
      s.row(p) *= std::cos(phase);
    } else {
      s.row(p) *= std::polar(1.0, phase);
    }
  }
  return inverse(s);
}

void enforce_real_symmetry(Spectrum& u_hat) {
  const int rows = static_cast<int>(u_hat.rows());
  const int ny = static_cast<int>(u_hat.cols());
  u_hat.row(rows - 1).setZero();
  u_hat.col(ny / 2).setZero();
  u_hat(0, 0) = u_hat(0, 0).real();
  for (int l = 1; l < ny / 2; ++l) {
    const std::complex<double> avg = 0.5 * (u_hat(0, l) + std::conj(u_hat(0, ny - l)));
    u_hat(0, l) = avg;
    u_hat(0, ny - l) = std::conj(avg);
  }
}

double integrate(const Field& u, const Grid2D& grid) {
  return u.sum() * grid.cell_area();
}

double inner(const Field& u, const Field& v, const Grid2D& grid) {
  return u.cwiseProduct(v).sum() * grid.cell_area();
}

double h1_norm_squared(const Field& u, const Fft2D& fft) {
  const Field ux = fft.dx(u);
  const Field uy = fft.dy(u);
  const Grid2D& g = fft.grid();
  return inner(u, u, g) + inner(ux, ux, g) + inner(uy, uy, g);
}

}  // namespace zkls
