// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "core/fft.hpp"
#include "core/grid.hpp"

namespace zkls {

// Grid used for the branch at c0: X = 40/sqrt(c0), L = 2/sqrt(5 c0).
Grid2D critical_grid(double c0, int nx = 256, int n_y = 16);

// Samples of Q_{c0}^{3/2} cos(y/L) and Q_{c0}^{3/2} sin(y/L).
Field kernel_cos(double c0, const Grid2D& grid);
Field kernel_sin(double c0, const Grid2D& grid);
// Q_c(x) sampled on every y column.
Field line_soliton(double c, const Grid2D& grid);

struct BranchOptions {
  int max_iterations = 30;
  // Newton stops once the residual L2 norm is below tolerance * ||phi||.
  double tolerance = 1e-12;
};

struct BranchPoint {
  double a1 = 0.0;
  double a2 = 0.0;
  double c0 = 1.0;
  double c_of_a = 1.0;
  Field field;
  double residual_norm = 0.0;
  double field_norm = 0.0;
  // Tangent of the branch from implicit differentiation.
  Field d_a1;
  Field d_a2;
  double dc_da1 = 0.0;
  double dc_da2 = 0.0;
  std::vector<double> residual_history;

  double amplitude() const;
};

// Newton solve of -Delta phi + c phi - phi^2 = 0 for the y-dependent branch,
// with the kernel projections of phi - Q pinned to (a1, a2). An optional
// previous point seeds the iteration.
BranchPoint solve_branch(double c0, double a1, const Grid2D& grid, double a2 = 0.0,
                         const BranchPoint* seed = nullptr,
                         const BranchOptions& options = {});

// Solves the amplitudes in order along the ray at angle theta.
std::vector<BranchPoint> continue_branch(double c0, std::span<const double> amplitudes,
                                         const Grid2D& grid, double theta = 0.0,
                                         const BranchOptions& options = {});

struct C2Estimate {
  double c_second = 0.0;      // fitted second derivative of c(a) at 0
  double from_curvature = 0.0;
  double from_mass = 0.0;
  double norm_q_sq = 0.0;     // ||Q_{c0}||^2 on the torus
  double norm_k_sq = 0.0;     // ||Q^{3/2} cos(y/L)||^2
};

// C_{2,c0} from the curvature of c(a) and independently from the mass.
// Throws if the two disagree by more than 10%.
C2Estimate compute_c2_constant(double c0, std::span<const BranchPoint> branch,
                               const Grid2D& grid);

// Least-squares polynomial model of the branch in (a1, a2), built from
// points on the a1 axis and extended to every direction by y-translation.
class BranchInterp {
 public:
  BranchInterp(double c0, const Grid2D& grid, std::span<const BranchPoint> axis_points);

  double c0() const noexcept { return c0_; }
  const Grid2D& grid() const noexcept { return grid_; }
  double max_amplitude() const noexcept { return r_max_; }

  // c(a) from the even fit.
  double c_of_a(double amplitude) const;
  // phi(a) or its a_i derivative on the branch grid.
  Field phi(double a1, double a2) const;
  // Theta(a, c)(x, y) = (c/c0) phi(a)(sqrt(c/c0) x, y) and its partial
  // derivatives in a1, a2 on any grid with the same L.
  struct ThetaSet {
    Field theta;
    Field d_a1;
    Field d_a2;
  };
  ThetaSet theta(double a1, double a2, double c, const Grid2D& target,
                 bool derivatives = true) const;
  double mass(double a1, double a2) const;

 private:
  double c0_;
  Grid2D grid_;
  double r_max_ = 0.0;
  int n_modes_ = 0;
  int terms_ = 0;
  // coeff_[n][k] is the x profile multiplying |a|^{2k} Re[(a1 - i a2)^n e^{iny/L}].
  std::vector<std::vector<Eigen::VectorXd>> coeff_;
  Eigen::VectorXd c_fit_;  // c(r) = c0 + sum_k c_fit_[k] r^{2k+2}
};

// Mass-matching speed gamma_c(a) = c0 (||Q_c||^2 / ||phi(a)||^2)^{2/3}.
double gamma_from_mass(double c, double c0, double L, double phi_mass);
double gamma_speed(double c, double a1, double a2, const BranchInterp& interp);

// S_c(u) = E(u) + c M(u) on a grid.
double action(const Field& u, double c, const Fft2D& fft);

// S_c(Theta(a, gamma_c(a))) - S_c(Q_c) using an exactly solved branch point.
double action_gap(double c, const BranchPoint& point, const Grid2D& grid);
double action_gap(double c, double a1, double a2, const BranchInterp& interp);

// 5 c0 C2 ||Q^{3/2} cos(y/L)||^2 / (48 ||Q||^2), the |a|^4 coefficient of the gap at c = c0.
double quartic_gap_prediction(double c0, const C2Estimate& c2);
// Leading coefficient A of gap = A r^4 + B r^6 by least squares.
double quartic_gap_fit(std::span<const double> amplitudes, std::span<const double> gaps);

// f(s x) for each column of f, by trigonometric interpolation in x.
Field resample_scaled(const Field& f, const Grid1D& from, double s, const Grid1D& to);

}  // namespace zkls
