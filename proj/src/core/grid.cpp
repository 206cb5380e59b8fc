// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "core/error.hpp"

namespace zkls {

using std::numbers::pi;

Grid1D::Grid1D(double half_width_in, int n_points_in)
    : half_width(half_width_in), n_points(n_points_in) {
  require(std::isfinite(half_width) && half_width > 0.0,
          ErrorKind::InvalidArgument, "grid half width must be positive");
  require(n_points >= 64 && n_points % 2 == 0, ErrorKind::InvalidArgument,
          "grid point count must be even and at least 64");
}

Eigen::VectorXd Grid1D::nodes() const {
  Eigen::VectorXd x(n_points);
  for (int j = 0; j < n_points; ++j) x[j] = node(j);
  return x;
}

Eigen::VectorXd Grid1D::wavenumbers() const {
  Eigen::VectorXd k(n_points);
  const double base = pi / half_width;
  for (int j = 0; j < n_points; ++j) {
    const int m = j <= n_points / 2 ? j : j - n_points;
    k[j] = base * m;
  }
  return k;
}

void Grid1D::check_resolves(double c) const {
  require(half_width * std::sqrt(c) >= 20.0 - 1e-12, ErrorKind::Precondition,
          "grid half width " + std::to_string(half_width) +
              " is below 20/sqrt(c) for c = " + std::to_string(c));
}

Grid2D::Grid2D(Grid1D x_in, int n_y_in, double L_in)
    : x(x_in), n_y(n_y_in), L(L_in) {
  require(n_y >= 16 && n_y % 2 == 0, ErrorKind::InvalidArgument,
          "n_y must be even and at least 16");
  require(std::isfinite(L) && L > 0.0, ErrorKind::InvalidArgument,
          "torus parameter L must be positive");
}

double Grid2D::hy() const noexcept { return 2.0 * pi * L / n_y; }

Eigen::VectorXd Grid2D::y_nodes() const {
  Eigen::VectorXd y(n_y);
  for (int l = 0; l < n_y; ++l) y[l] = y_node(l);
  return y;
}

Eigen::MatrixXd fourier_d1(const Grid1D& grid) {
  const int n = grid.n_points;
  const double h = 2.0 * pi / n;
  const double scale = pi / grid.half_width;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int m = i - j;
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = scale * 0.5 * sign / std::tan(0.5 * m * h);
    }
  }
  return d;
}

Eigen::MatrixXd fourier_d2(const Grid1D& grid) {
  return fourier_d2(grid.n_points, grid.half_width);
}

Eigen::MatrixXd fourier_d2(int n, double half_width) {
  require(n >= 2 && n % 2 == 0, ErrorKind::InvalidArgument,
          "differentiation matrix size must be even");
  const double h = 2.0 * pi / n;
  const double scale = (pi / half_width) * (pi / half_width);
  Eigen::MatrixXd d(n, n);
  const double diag = -pi * pi / (3.0 * h * h) - 1.0 / 6.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        d(i, j) = scale * diag;
        continue;
      }
      const int m = i - j;
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      const double s = std::sin(0.5 * m * h);
      d(i, j) = -scale * 0.5 * sign / (s * s);
    }
  }
  return d;
}

Eigen::MatrixXd trig_interpolation_matrix(const Grid1D& grid, const Eigen::VectorXd& z) {
  const int n = grid.n_points;
  const double w = pi / grid.half_width;
  Eigen::MatrixXd t(z.size(), n);
  for (Eigen::Index r = 0; r < z.size(); ++r) {
    for (int j = 0; j < n; ++j) {
      // Periodic sinc for an even number of nodes.
      const double theta = w * (z[r] - grid.node(j));
      const double half = 0.5 * theta;
      const double s = std::sin(half);
      if (std::abs(s) < 1e-14) {
        t(r, j) = std::cos(0.5 * n * theta);
      } else {
        t(r, j) = std::sin(0.5 * n * theta) * std::cos(half) / (n * s);
      }
    }
  }
  return t;
}

}  // namespace zkls
