// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "core/bifurcation.hpp"
#include "core/error.hpp"
#include "core/evans.hpp"
#include "core/simulator.hpp"
#include "core/soliton.hpp"

using namespace zkls;

namespace {

SimConfig soliton_config(double L, double t_end) {
  SimConfig cfg;
  cfg.grid = Grid2D(Grid1D(40.0, 256), 16, L);
  cfg.dt = 0.01;
  cfg.t_end = t_end;
  cfg.record_every = 100;
  return cfg;
}

}  // namespace

TEST_CASE("zero stays zero") {
  const Simulator sim(soliton_config(0.5, 1.0));
  auto st = sim.initial_state(Field::Zero(256, 16));
  sim.run(st);
  CHECK(sim.field(st).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("line soliton travels at speed c") {
  const auto cfg = soliton_config(0.5, 10.0);
  const Simulator sim(cfg);
  const Field q = line_soliton(1.0, cfg.grid);
  auto st = sim.initial_state(q);
  sim.run(st);
  const auto& led = st.ledger;
  REQUIRE(led.size() == 11);
  const double e0 = led.front().energy;
  const double m0 = led.front().mass;
  for (const auto& row : led) {
    CHECK(std::abs(row.energy - e0) < 1e-8 * std::abs(e0));
    CHECK(std::abs(row.mass - m0) < 1e-10 * m0);
    CHECK(std::abs(row.crest - row.t) < 1e-6);
    CHECK(row.orbit_distance < 1e-4);
  }
  // Field at t = 10 against Q(x - 10) on the lab grid.
  const Field u = sim.field(st);
  const SolitonProfile s(1.0);
  const double off = sim.lab_offset(st);
  double err = 0.0;
  for (int j = 0; j < cfg.grid.nx(); ++j) {
    err = std::max(err, std::abs(u(j, 3) - s.q(cfg.grid.x.node(j) + off - 10.0)));
  }
  CHECK(err < 1e-5);
  // Torus mass of Q_1 is 2 pi L * 6.
  CHECK(m0 == doctest::Approx(2 * std::numbers::pi * 0.5 * 6.0).epsilon(1e-10));
}

TEST_CASE("crest position") {
  const Grid2D g(Grid1D(40.0, 512), 16, 0.5);
  const SolitonProfile s(1.0);
  for (double shift : {0.0, 0.37, -2.61}) {
    Field u(g.nx(), g.n_y);
    for (int j = 0; j < g.nx(); ++j) u.row(j).setConstant(s.q(g.x.node(j) - shift));
    CHECK(std::abs(crest_position(u, g) - shift) < 1e-3);
  }
}

TEST_CASE("random perturbation") {
  const Grid2D g(Grid1D(40.0, 256), 16, 0.7);
  const Fft2D fft(g);
  const Field a = random_perturbation(g, 5);
  const Field b = random_perturbation(g, 5);
  const Field c = random_perturbation(g, 6);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
  CHECK(std::abs(h1_norm_squared(a, fft) - 1.0) < 1e-12);
  // Localised: negligible near the cell edge.
  CHECK(a.topRows(10).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("unstable initial data") {
  const Grid2D g(Grid1D(40.0, 256), 16, 2.0);
  const Fft2D fft(g);
  const auto d1 = construct_unstable_data(1.0, 2.0, 1, 1e-4, g);
  const auto d2 = construct_unstable_data(1.0, 2.0, 1, 2e-4, g);
  CHECK(d1.mu_max > 0.0);
  const double chi_sq = g.x.spacing() * d1.chi.squaredNorm();
  const auto bands = band_energies(fft.forward(d1.u0), fft, 3);
  CHECK(std::abs(bands[1] / (std::numbers::pi * 2.0 * 1e-8 * chi_sq) - 1.0) < 1e-6);
  const auto bands2 = band_energies(fft.forward(d2.u0), fft, 3);
  CHECK(bands2[1] == doctest::Approx(4.0 * bands[1]).epsilon(1e-12));
  CHECK(std::abs(bands[0] - bands2[0]) < 1e-12 * bands[0]);

  const double root = evans_root(EvansProblem::make(1.0, 0.25));
  CHECK(std::abs(d1.mu_max - root) / root < 0.02);

  CHECK_THROWS_AS(construct_unstable_data(1.0, 0.5, 1, 1e-4, Grid2D(Grid1D(40.0, 256), 16, 0.5)),
                  Error);
}

TEST_CASE("configuration checks") {
  SimConfig cfg = soliton_config(0.5, 1.0);
  cfg.dt = -1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = soliton_config(0.5, 1.0);
  cfg.record_every = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("orbital report") {
  std::vector<LedgerRow> led(3);
  for (int i = 0; i < 3; ++i) {
    led[i].t = i;
    led[i].orbit_distance = 1e-3 * (i + 1);
  }
  auto r = orbital_report(led, 1e-3);
  CHECK(r.stays_close);
  CHECK_FALSE(r.first_exceed_time.has_value());
  led[2].orbit_distance = 0.5;
  r = orbital_report(led, 1e-3);
  CHECK_FALSE(r.stays_close);
  REQUIRE(r.first_exceed_time.has_value());
  CHECK(*r.first_exceed_time == 2.0);
}
