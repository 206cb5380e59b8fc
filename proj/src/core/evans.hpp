// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>

namespace zkls {

using cdouble = std::complex<double>;

struct EvansProblem {
  double c = 1.0;
  double a = 0.0;
  double x_max = 40.0;
  double ode_rel_tol = 1e-10;
  double ode_abs_tol = 1e-12;

  // Defaults x_max to 40/sqrt(c) and validates.
  static EvansProblem make(double c, double a);
  void validate() const;
};

struct EvansValue {
  cdouble lambda;
  cdouble d;
  cdouble mu1;
  bool gap_ok = false;
};

// Companion matrix of nu^3 - (c + a) nu + lambda.
Eigen::Matrix3cd a_infinity(double a, cdouble lambda, double c);

// Evans function by rescaled shooting from both ends to x = 0.
EvansValue evans_eval(const EvansProblem& problem, cdouble lambda);

// First positive real root of lambda -> D(a, lambda), for 0 < a < 5c/4.
double evans_root(const EvansProblem& problem);

struct OriginSlope {
  double closed_form = 0.0;
  double finite_difference = 0.0;
};

// dD/da at (a, lambda) = (0, 0): the closed form -(1/(72 c^{7/2})) int (Q')^2
// and a centred difference in a, extrapolated in lambda towards 0.
OriginSlope dD_da_origin(double c);

}  // namespace zkls
