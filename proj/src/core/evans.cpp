// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/evans.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <sstream>

#include "core/error.hpp"
#include "core/soliton.hpp"

namespace zkls {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 6>;
using Vec3 = Eigen::Vector3cd;

struct Modes {
  cdouble mu1;
  Vec3 right;
  Vec3 left;
  bool gap_ok = false;
};

Modes select_decaying_mode(double a, cdouble lambda, double c) {
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(a_infinity(a, lambda, c), false);
  require(es.info() == Eigen::Success, ErrorKind::Numerical,
          "eigen-decomposition of A_infinity failed");
  std::array<cdouble, 3> nu{es.eigenvalues()[0], es.eigenvalues()[1],
                            es.eigenvalues()[2]};
  const double s = c + a;
  // Polish each root on the cubic itself.
  for (auto& r : nu) {
    for (int it = 0; it < 3; ++it) {
      const cdouble p = r * r * r - s * r + lambda;
      const cdouble dp = 3.0 * r * r - s;
      if (std::abs(dp) == 0.0) break;
      r -= p / dp;
    }
  }
  std::sort(nu.begin(), nu.end(),
            [](cdouble x, cdouble y) { return x.real() < y.real(); });

  Modes m;
  m.mu1 = nu[0];
  const double scale = 1.0 + std::abs(nu[0]);
  m.gap_ok = nu[1].real() - nu[0].real() > 1e-9 * scale &&
             std::abs(nu[1] - nu[0]) > 1e-9 * scale &&
             std::abs(nu[2] - nu[0]) > 1e-9 * scale;

  const cdouble mu = m.mu1;
  m.right = Vec3(1.0, mu, mu * mu);
  m.left = Vec3(mu * mu - s, mu, 1.0) / (3.0 * mu * mu - s);
  Eigen::Index k = 0;
  m.right.cwiseAbs().maxCoeff(&k);
  const cdouble phase = std::abs(m.right[k]) / m.right[k];
  m.right *= phase;
  m.left /= phase;
  return m;
}

State pack(const Vec3& v) {
  return {v[0].real(), v[0].imag(), v[1].real(), v[1].imag(), v[2].real(), v[2].imag()};
}

Vec3 unpack(const State& s) {
  return Vec3(cdouble(s[0], s[1]), cdouble(s[2], s[3]), cdouble(s[4], s[5]));
}

// Right-hand sides for the rescaled solution and the rescaled adjoint.
struct Shooting {
  SolitonProfile q;
  double shift;  // c + a
  cdouble lambda;
  cdouble mu1;

  Eigen::Matrix3cd shifted(double x) const {
    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    m(0, 1) = 1.0;
    m(1, 2) = 1.0;
    m(2, 0) = -2.0 * q.q_prime(x) - lambda;
    m(2, 1) = shift - 2.0 * q.q(x);
    m.diagonal().array() -= mu1;
    return m;
  }
};

Vec3 integrate(const Shooting& sh, const EvansProblem& p, Vec3 start, double from,
               bool adjoint) {
  auto rhs = [&](const State& s, State& ds, double x) {
    const Eigen::Matrix3cd m = sh.shifted(x);
    const Vec3 v = unpack(s);
    const Vec3 dv = adjoint ? Vec3(-(m.transpose() * v)) : Vec3(m * v);
    ds = pack(dv);
  };
  State state = pack(start);
  auto stepper = odeint::make_controlled(p.ode_abs_tol, p.ode_rel_tol,
                                         odeint::runge_kutta_fehlberg78<State>());
  const double dx0 = from > 0.0 ? -1e-3 : 1e-3;
  try {
    odeint::integrate_adaptive(stepper, rhs, state, from, 0.0, dx0);
  } catch (const std::exception& e) {
    fail(ErrorKind::Numerical, std::string("Evans shooting failed: ") + e.what());
  }
  const Vec3 out = unpack(state);
  require(out.allFinite(), ErrorKind::Numerical, "Evans shooting produced non-finite values");
  return out;
}

// Evaluation without the a >= 0 restriction, used by the origin difference.
EvansValue eval_unchecked(const EvansProblem& p, cdouble lambda) {
  const Modes m = select_decaying_mode(p.a, lambda, p.c);
  EvansValue out;
  out.lambda = lambda;
  out.mu1 = m.mu1;
  out.gap_ok = m.gap_ok;
  if (!m.gap_ok) {
    std::ostringstream os;
    os << "mu_1 gap fails at a = " << p.a << ", lambda = " << lambda
       << " (mu_1 = " << m.mu1 << ")";
    fail(ErrorKind::Precondition, os.str());
  }
  const Shooting sh{SolitonProfile(p.c), p.c + p.a, lambda, m.mu1};
  const Vec3 zeta = integrate(sh, p, m.right, p.x_max, false);
  const Vec3 eta = integrate(sh, p, m.left, -p.x_max, true);
  out.d = eta.transpose() * zeta;
  return out;
}

}  // namespace

EvansProblem EvansProblem::make(double c, double a) {
  EvansProblem p;
  p.c = c;
  p.a = a;
  p.x_max = 40.0 / std::sqrt(c);
  p.validate();
  return p;
}

void EvansProblem::validate() const {
  require(std::isfinite(c) && c > 0.0, ErrorKind::InvalidArgument,
          "speed c must be positive");
  require(std::isfinite(a) && a >= 0.0, ErrorKind::InvalidArgument,
          "transverse shift a must be non-negative");
  require(x_max * std::sqrt(c) >= 30.0 - 1e-12, ErrorKind::InvalidArgument,
          "x_max * sqrt(c) must be at least 30");
  require(ode_rel_tol > 0.0 && ode_abs_tol > 0.0, ErrorKind::InvalidArgument,
          "ODE tolerances must be positive");
}

Eigen::Matrix3cd a_infinity(double a, cdouble lambda, double c) {
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  m(0, 1) = 1.0;
  m(1, 2) = 1.0;
  m(2, 0) = -lambda;
  m(2, 1) = c + a;
  return m;
}

EvansValue evans_eval(const EvansProblem& problem, cdouble lambda) {
  problem.validate();
  require(std::isfinite(lambda.real()) && std::isfinite(lambda.imag()),
          ErrorKind::InvalidArgument, "lambda must be finite");
  return eval_unchecked(problem, lambda);
}

double evans_root(const EvansProblem& problem) {
  problem.validate();
  const double c = problem.c;
  require(problem.a > 0.0 && problem.a < 1.25 * c, ErrorKind::Precondition,
          "evans_root needs 0 < a < 5c/4");
  auto d = [&](double lambda) { return evans_eval(problem, lambda).d.real(); };

  double lo = 1e-6;
  double f_lo = d(lo);
  require(f_lo < 0.0, ErrorKind::Numerical,
          "D(a, 1e-6) is not negative; truncation or tolerance too coarse");
  double hi = c;
  double f_hi = d(hi);
  while (f_hi <= 0.0) {
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    require(hi <= 1e3 * c, ErrorKind::Numerical,
            "no sign change of D(a, lambda) up to lambda = 1000 c");
    f_hi = d(hi);
  }
  auto tol = [](double x, double y) {
    return std::abs(x - y) <= 1e-8 * std::min(std::abs(x), std::abs(y));
  };
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(d, lo, hi, f_lo, f_hi, tol, iters);
  require(iters < 200, ErrorKind::Numerical, "Evans root iteration did not converge");
  return 0.5 * (r.first + r.second);
}

OriginSlope dD_da_origin(double c) {
  const SolitonProfile q(c);
  OriginSlope out;
  const double grad_sq = c * q.moment_integral(2.0) - (2.0 / 3.0) * q.moment_integral(3.0);
  out.closed_form = -grad_sq / (72.0 * std::pow(c, 3.5));

  // D is analytic in (a, lambda) near the origin: a centred difference in a
  // carries an O(lambda) bias, removed by two Richardson steps in lambda.
  const double h = 1e-3 * c;
  EvansProblem p = EvansProblem::make(c, 0.0);
  auto slope = [&](double lambda) {
    EvansProblem plus = p, minus = p;
    plus.a = h;
    minus.a = -h;
    const double dp = eval_unchecked(plus, lambda).d.real();
    const double dm = eval_unchecked(minus, lambda).d.real();
    return (dp - dm) / (2.0 * h);
  };
  const double l1 = 4e-3 * std::pow(c, 1.5);
  const double s1 = slope(l1), s2 = slope(0.5 * l1), s3 = slope(0.25 * l1);
  const double r1 = 2.0 * s2 - s1;
  const double r2 = 2.0 * s3 - s2;
  out.finite_difference = (4.0 * r2 - r1) / 3.0;

  const double rel = std::abs(out.finite_difference - out.closed_form) /
                     std::abs(out.closed_form);
  if (rel > 1e-3) {
    std::ostringstream os;
    os << "dD/da at the origin: difference estimate " << out.finite_difference
       << " disagrees with closed form " << out.closed_form << " (relative " << rel
       << ")";
    fail(ErrorKind::Numerical, os.str());
  }
  return out;
}

}  // namespace zkls
