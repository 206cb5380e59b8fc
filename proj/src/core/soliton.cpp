// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/soliton.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "core/error.hpp"

namespace zkls {

namespace {

constexpr double kClamp = 350.0;

// log cosh(s) for any real s without overflow.
double log_cosh(double s) {
  const double a = std::abs(s);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

}  // namespace

SolitonProfile::SolitonProfile(double c) : c_(c), root_c_(std::sqrt(c)) {
  require(std::isfinite(c) && c > 0.0, ErrorKind::InvalidArgument,
          "soliton speed must be positive");
}

double SolitonProfile::half_arg(double x) const noexcept {
  return 0.5 * root_c_ * x;
}

double SolitonProfile::sech2(double x) const noexcept {
  const double s = half_arg(x);
  if (std::abs(s) > kClamp) return 0.0;
  const double ch = std::cosh(s);
  return 1.0 / (ch * ch);
}

double SolitonProfile::q(double x) const noexcept { return 1.5 * c_ * sech2(x); }

double SolitonProfile::q_prime(double x) const noexcept {
  return -root_c_ * std::tanh(half_arg(x)) * q(x);
}

double SolitonProfile::q_second(double x) const noexcept {
  const double t = std::tanh(half_arg(x));
  return c_ * (t * t - 0.5 * sech2(x)) * q(x);
}

double SolitonProfile::q_pow(double x, double p) const noexcept {
  const double s = half_arg(x);
  if (std::abs(s) > kClamp) return 0.0;
  return std::exp(p * (std::log(1.5 * c_) - 2.0 * log_cosh(s)));
}

double SolitonProfile::dq_dc(double x) const noexcept {
  return q(x) / c_ + x / (2.0 * c_) * q_prime(x);
}

double SolitonProfile::phi(double x) const noexcept {
  return root_c_ * std::tanh(half_arg(x));
}

double SolitonProfile::phi_prime(double x) const noexcept {
  return 0.5 * c_ * sech2(x);
}

double SolitonProfile::critical_length() const noexcept {
  return 2.0 / std::sqrt(5.0 * c_);
}

double SolitonProfile::moment_integral(double p) const {
  require(std::isfinite(p) && p > 0.0, ErrorKind::InvalidArgument,
          "moment exponent must be positive");
  const double rate = p * root_c_;
  const double panel = 1.0 / (root_c_ * std::max(1.0, p));
  const auto f = [&](double x) { return q_pow(x, p); };

  double half_width = std::max(40.0 / root_c_, 40.0);
  double result = integrate_even(f, half_width, panel);
  // Enlarge the cell until the analytic tail bound is below 1e-14 of the value.
  for (int pass = 0; pass < 4; ++pass) {
    const double prefactor = 2.0 * std::pow(6.0 * c_, p) / rate;
    const double needed = std::log(prefactor / (1e-14 * result)) / rate;
    if (needed <= half_width) break;
    half_width = std::ceil(needed);
    result = integrate_even(f, half_width, panel);
  }
  return result;
}

double SolitonProfile::dq_squared_integral() const {
  const auto f = [&](double x) {
    const double d = q_prime(x);
    return d * d;
  };
  const double half_width = std::max(40.0 / root_c_, 40.0);
  return integrate_even(f, half_width, 0.5 / root_c_);
}

double integrate_even(const std::function<double(double)>& f, double half_width,
                      double panel_width) {
  using boost::math::quadrature::gauss;
  const int panels = std::max(1, static_cast<int>(std::ceil(half_width / panel_width)));
  const double w = half_width / panels;
  double sum = 0.0;
  // Summing from the tail inward keeps the small contributions.
  for (int k = panels - 1; k >= 0; --k) {
    sum += gauss<double, 30>::integrate(f, k * w, (k + 1) * w);
  }
  return 2.0 * sum;
}

}  // namespace zkls
