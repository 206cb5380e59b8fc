// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>

#include "core/bifurcation.hpp"
#include "core/diagnostics.hpp"
#include "core/error.hpp"
#include "core/simulator.hpp"
#include "core/soliton.hpp"

using namespace zkls;

namespace {

Field shifted_soliton(double c, double shift, const Grid2D& g) {
  const SolitonProfile s(c);
  Field u(g.nx(), g.n_y);
  for (int j = 0; j < g.nx(); ++j) u.row(j).setConstant(s.q(g.x.node(j) - shift));
  return u;
}

}  // namespace

TEST_CASE("weight profile") {
  const WeightProfile w{4.0, 10.0, 0.4};
  CHECK(w.psi(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(w.psi(-200.0) < 1e-20);
  CHECK(w.psi(200.0) == doctest::Approx(1.0).epsilon(1e-15));
  const double h = 1e-4;
  for (double x : {-7.0, -1.0, 0.0, 2.5, 9.0}) {
    CHECK(std::abs(w.psi_prime(x) - (w.psi(x + h) - w.psi(x - h)) / (2 * h)) < 1e-8);
    const double fd3 = (w.psi_prime(x + h) - 2 * w.psi_prime(x) + w.psi_prime(x - h)) / (h * h);
    CHECK(std::abs(w.psi_third(x) - fd3) < 1e-6);
    CHECK(std::abs(w.psi_third(x)) <= w.psi_prime(x) / (w.R * w.R) + 1e-15);
    CHECK(w.psi(x + 0.1) > w.psi(x));
  }
}

TEST_CASE("decay fit") {
  std::vector<double> x0{5, 10, 15, 20};
  std::vector<double> v;
  for (double x : x0) v.push_back(3.0 * std::exp(-0.25 * x));
  const auto f = fit_decay(x0, v);
  CHECK(f.valid);
  CHECK_FALSE(f.trivial);
  CHECK(f.rate == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(f.prefactor == doctest::Approx(3.0).epsilon(1e-12));

  const auto t = fit_decay(x0, {0.0, -1e-3, 0.0, -2.0});
  CHECK(t.trivial);
  CHECK_FALSE(t.valid);
  const auto m = fit_decay(x0, {1.0, 0.0, 0.5, 0.1});
  CHECK_FALSE(m.valid);
  CHECK_FALSE(m.trivial);
  CHECK_THROWS_AS(fit_decay({1.0}, {1.0}), Error);
}

TEST_CASE("decompose a shifted line soliton") {
  const Grid2D g(Grid1D(40.0, 256), 16, 0.5);
  const Fft2D fft(g);
  for (double c : {1.0, 1.05}) {
    const Field u = shifted_soliton(c, 0.731, g);
    const auto m = decompose(u, 1.0, nullptr, fft);
    CHECK(std::abs(m.rho - 0.731) < 1e-9);
    CHECK(std::abs(m.c_mod - c) < 1e-9);
    CHECK(std::sqrt(h1_norm_squared(m.eta, fft)) < 1e-8);
  }
  // Far from the orbit the decomposition is refused.
  CHECK_THROWS_AS(decompose(Field::Zero(256, 16), 1.0, nullptr, fft), Error);
}

TEST_CASE("modulation rates") {
  std::vector<ModulationSample> s(5);
  for (int i = 0; i < 5; ++i) {
    s[i].t = i;
    s[i].rho = 1.02 * i;
    s[i].c_mod = 1.0;
    s[i].eta_l2 = 0.1;
  }
  const auto r = modulation_rates(s, 1.0, nullptr);
  REQUIRE(r.t.size() == 3);
  for (double x : r.rho_ratio) CHECK(x == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.c_ratio[1] == 0.0);
  CHECK(r.bounded);

  for (auto& x : s) x.eta_l2 = 0.0;
  const auto z = modulation_rates(s, 1.0, nullptr);
  CHECK(std::isnan(z.rho_ratio[0]));

  for (int i = 0; i < 5; ++i) s[i].eta_l2 = i < 2 ? 0.1 : 0.01;
  CHECK_FALSE(modulation_rates(s, 1.0, nullptr).bounded);
}

TEST_CASE("monotonicity functionals") {
  const Grid2D g(Grid1D(40.0, 256), 16, 0.5);
  const Fft2D fft(g);
  std::vector<Snapshot> run(3);
  for (int i = 0; i < 3; ++i) {
    run[i].t = i;
    run[i].u = Field::Zero(256, 16);
  }
  const WeightProfile w{4.0, 10.0, 0.4};
  const auto i_series = monotonicity_I(run, w, 2, fft);
  CHECK(i_series.value.size() == 3);
  CHECK(i_series.violation == 0.0);
  CHECK(monotonicity_J(run, w, 2, fft).violation == 0.0);

  CHECK_THROWS_AS(monotonicity_I(run, WeightProfile{1.0, 10.0, 0.4}, 2, fft), Error);
}

TEST_CASE("weighted coercivity") {
  const auto rep = coercivity_check(1.0, 10);
  CHECK(rep.pass);
  CHECK(rep.max_identity_error < 1e-8);
  CHECK(rep.min_margin >= -1e-10);
  CHECK(rep.k4 > 0.0);

  // u = Q makes the middle term vanish: u_x + u phi = 0.
  const Grid1D g(40.0, 4096);
  const SolitonProfile s(1.0);
  Eigen::VectorXd q(g.n_points);
  for (int j = 0; j < g.n_points; ++j) q[j] = s.q(g.node(j));
  const auto sq = coercivity_sample(1.0, q, g);
  CHECK(std::abs(sq.middle) < 1e-10 * sq.weighted_l2);
  CHECK(sq.margin >= -1e-10);
}

TEST_CASE("virial epsilon") {
  const double e1 = virial_epsilon(1.0, 0.2);
  CHECK(e1 > 0.0);
  CHECK(virial_epsilon(1.0, 0.4) == doctest::Approx(2.0 * e1).epsilon(1e-14));
  CHECK(virial_epsilon(1.0, 0.2, 2.0) < e1);
}
