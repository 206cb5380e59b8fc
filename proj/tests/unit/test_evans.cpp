// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/evans.hpp"
#include "core/soliton.hpp"
#include "core/spectral.hpp"

using namespace zkls;

namespace {

std::vector<cdouble> sorted_eigs(const Eigen::Matrix3cd& m) {
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(m);
  std::vector<cdouble> v(es.eigenvalues().data(), es.eigenvalues().data() + 3);
  std::sort(v.begin(), v.end(), [](cdouble x, cdouble y) { return x.real() < y.real(); });
  return v;
}

}  // namespace

TEST_CASE("companion matrix at infinity") {
  auto e = sorted_eigs(a_infinity(0.0, 0.0, 1.0));
  CHECK(std::abs(e[0] + 1.0) < 1e-12);
  CHECK(std::abs(e[1]) < 1e-12);
  CHECK(std::abs(e[2] - 1.0) < 1e-12);

  e = sorted_eigs(a_infinity(1.25, 0.0, 1.0));
  CHECK(std::abs(e[0] + 1.5) < 1e-12);
  CHECK(std::abs(e[2] - 1.5) < 1e-12);

  // Characteristic polynomial nu^3 - (c + a) nu + lambda at each root.
  const cdouble lam(2.0, 0.7);
  for (cdouble nu : sorted_eigs(a_infinity(0.3, lam, 1.1))) {
    CHECK(std::abs(nu * nu * nu - 1.4 * nu + lam) < 1e-10);
  }

  // Large lambda: roots near (-lambda)^{1/3} times cube roots of unity.
  const double big = 1e6;
  const auto r = sorted_eigs(a_infinity(0.0, big, 1.0));
  CHECK(std::abs(r[0] + 100.0) < 1e-2);
}

TEST_CASE("Evans function near the origin") {
  const auto v0 = evans_eval(EvansProblem::make(1.0, 0.0), 1e-8);
  CHECK(v0.gap_ok);
  CHECK(std::abs(v0.d) < 1e-4);

  const auto v = evans_eval(EvansProblem::make(1.0, 0.5), 1e-8);
  CHECK(v.gap_ok);
  CHECK(std::abs(v.d.imag()) < 1e-10);
  CHECK(v.d.real() < 0.0);
  CHECK(v.mu1.real() < 0.0);
}

TEST_CASE("conjugate symmetry and truncation robustness") {
  const auto p = EvansProblem::make(1.0, 0.4);
  const cdouble lam(0.3, 0.8);
  const auto a = evans_eval(p, lam);
  const auto b = evans_eval(p, std::conj(lam));
  CHECK(std::abs(a.d - std::conj(b.d)) < 1e-10);

  auto wide = p;
  wide.x_max = 80.0;
  for (double l : {1e-6, 0.1, 2.0}) {
    CHECK(std::abs(evans_eval(p, l).d - evans_eval(wide, l).d) < 1e-8);
  }
}

TEST_CASE("root against the dense eigensolve") {
  const Grid1D g(40.0, 512);
  for (double a : {0.25, 0.6, 1.0}) {
    const double root = evans_root(EvansProblem::make(1.0, a));
    CHECK(root > 0.0);
    CHECK(std::abs(evans_eval(EvansProblem::make(1.0, a), root).d) < 1e-6);
    const auto ev =
        eigen_extremal(build_dx_lc(1.0, a, g, evans_matching_weight(1.0, a)), 1, false);
    CHECK(std::abs(ev[0].value.real() - root) / root < 1e-4);
  }
}

TEST_CASE("root scaling in c") {
  // Q_c(x) = c Q_1(sqrt(c) x) gives lambda(a; c) = c^{3/2} lambda(a/c; 1).
  const double r1 = evans_root(EvansProblem::make(1.0, 0.25));
  const double r2 = evans_root(EvansProblem::make(2.0, 0.5));
  CHECK(std::abs(r2 - std::pow(2.0, 1.5) * r1) / r2 < 1e-4);
}

TEST_CASE("root preconditions") {
  CHECK_THROWS_AS(evans_root(EvansProblem::make(1.0, 1.25)), Error);
  CHECK_THROWS_AS(evans_root(EvansProblem::make(1.0, 0.0)), Error);
  CHECK_THROWS_AS(EvansProblem::make(-1.0, 0.0), Error);
  auto p = EvansProblem::make(1.0, 0.2);
  p.x_max = 10.0;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("origin slope") {
  // Closed form from the Beta-function value int (Q_1')^2 = 6/5.
  const auto s1 = dD_da_origin(1.0);
  CHECK(std::abs(s1.closed_form + (6.0 / 5.0) / 72.0) < 1e-12);
  CHECK(std::abs(s1.finite_difference - s1.closed_form) / std::abs(s1.closed_form) < 1e-4);
  for (double c : {0.5, 2.0}) {
    const auto s = dD_da_origin(c);
    CHECK(s.closed_form < 0.0);
    CHECK(s.finite_difference < 0.0);
    CHECK(std::abs(s.closed_form / s1.closed_form - 1.0 / c) < 1e-6);
    CHECK(std::abs(s.finite_difference / s1.finite_difference - 1.0 / c) < 1e-4);
  }
}
