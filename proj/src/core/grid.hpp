// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

namespace zkls {

// Periodic cell [-X, X) with N equispaced nodes x_j = -X + j h.
struct Grid1D {
  double half_width = 40.0;
  int n_points = 512;

  Grid1D() = default;
  Grid1D(double half_width, int n_points);

  double spacing() const noexcept { return 2.0 * half_width / n_points; }
  double node(int j) const noexcept { return -half_width + j * spacing(); }
  Eigen::VectorXd nodes() const;
  // Wavenumbers in FFT order; the Nyquist entry is reported as +N/2.
  Eigen::VectorXd wavenumbers() const;

  // Throws unless X >= 20/sqrt(c).
  void check_resolves(double c) const;
};

// Grid1D in x times a uniform grid on the torus [0, 2 pi L) in y.
struct Grid2D {
  Grid1D x;
  int n_y = 16;
  double L = 1.0;

  Grid2D() = default;
  Grid2D(Grid1D x, int n_y, double L);

  int nx() const noexcept { return x.n_points; }
  double hy() const noexcept;
  double y_node(int l) const noexcept { return l * hy(); }
  Eigen::VectorXd y_nodes() const;
  // Cell area element h_x h_y for trapezoid sums.
  double cell_area() const noexcept { return x.spacing() * hy(); }
};

// Fourier collocation differentiation matrices on the periodic cell.
Eigen::MatrixXd fourier_d1(const Grid1D& grid);
Eigen::MatrixXd fourier_d2(const Grid1D& grid);
// Same on n nodes of a cell of length 2 * half_width, without the size limits
// of Grid1D (used for the short y direction).
Eigen::MatrixXd fourier_d2(int n, double half_width);

// Values at arbitrary points z of the trigonometric interpolant through
// samples on `grid`: row t of the result weights the samples for z[t].
Eigen::MatrixXd trig_interpolation_matrix(const Grid1D& grid, const Eigen::VectorXd& z);

}  // namespace zkls
