// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

namespace zkls {

// The speed-c line soliton Q_c(x) = (3c/2) sech^2(sqrt(c) x / 2) and the
// closed-form quantities derived from it. Immutable.
class SolitonProfile {
 public:
  explicit SolitonProfile(double c);

  double speed() const noexcept { return c_; }

  double q(double x) const noexcept;
  double q_prime(double x) const noexcept;
  double q_second(double x) const noexcept;
  // Q_c^p without forming Q_c first, so tails stay representable.
  double q_pow(double x, double p) const noexcept;
  // Derivative of Q_c with respect to the speed at fixed x.
  double dq_dc(double x) const noexcept;

  // phi_c = -Q'/Q = sqrt(c) tanh(sqrt(c) x / 2) and its derivative Q/3.
  double phi(double x) const noexcept;
  double phi_prime(double x) const noexcept;

  // Integral of Q_c^p over the real line.
  double moment_integral(double p) const;
  // Integral of (Q_c')^2 by direct quadrature.
  double dq_squared_integral() const;

  // Negative eigenvalue -lambda_c of L_c and the critical torus size.
  double lambda_c() const noexcept { return 1.25 * c_; }
  double critical_length() const noexcept;

 private:
  double half_arg(double x) const noexcept;
  double sech2(double x) const noexcept;

  double c_;
  double root_c_;
};

// Integral over the real line of an even integrand, truncated to [-X, X] and
// evaluated with 30-point Gauss-Legendre panels.
double integrate_even(const std::function<double(double)>& f, double half_width,
                      double panel_width);

}  // namespace zkls
