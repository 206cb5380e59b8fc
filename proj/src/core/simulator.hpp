// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "core/fft.hpp"
#include "core/grid.hpp"

namespace zkls {

struct SimConfig {
  Grid2D grid;
  double dt = 0.01;
  double t_end = 10.0;
  bool dealias = true;
  double c = 1.0;
  int record_every = 10;
  // Soliton speed used for the orbit distance; defaults to c when unset.
  std::optional<double> orbit_speed;

  void validate() const;
};

inline constexpr int kLedgerBands = 5;

struct LedgerRow {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double band[kLedgerBands] = {};
  double crest = 0.0;  // lab-frame position
  double orbit_distance = std::numeric_limits<double>::quiet_NaN();
};

// The field is stored in a frame moving with speed c and shifted by whole
// grid cells; lab position = grid coordinate + c t + frame_shift.
struct SimState {
  double t = 0.0;
  std::int64_t steps = 0;
  Spectrum u_hat;
  double frame_shift = 0.0;
  std::vector<LedgerRow> ledger;
};

// H1 distance from u to the translation orbit of the line soliton Q_c.
class SolitonOrbit {
 public:
  SolitonOrbit(double c, const Grid2D& grid);
  // Returns the distance; `shift` receives the minimizing translation.
  double distance(const Field& u, double* shift = nullptr) const;

 private:
  Grid2D grid_;
  Fft1D fft_;
  std::unique_ptr<Fft2D> fft2_;
  Eigen::VectorXcd q_hat_;
  double q_h1_sq_ = 0.0;
};

class Simulator {
 public:
  explicit Simulator(SimConfig config);
  ~Simulator();

  const SimConfig& config() const noexcept { return config_; }
  const Fft2D& fft() const noexcept { return *fft_; }

  SimState initial_state(const Field& u0) const;
  void step(SimState& state) const;

  using Observer = std::function<void(const SimState&, const Field&)>;
  // Steps to t_end, recording every record_every steps (and at t = 0).
  void run(SimState& state, const Observer& observer = {}) const;

  Field field(const SimState& state) const;
  LedgerRow measure(const SimState& state) const;
  // Lab-frame position of the grid coordinate x = 0.
  double lab_offset(const SimState& state) const;
  // Rolls the stored field by whole cells so the crest sits near x = 0.
  void recenter(SimState& state) const;

 private:
  struct Coefficients;
  Spectrum nonlinear(const Spectrum& v, bool check) const;

  SimConfig config_;
  std::unique_ptr<Fft2D> fft_;
  std::unique_ptr<Coefficients> coef_;
  SolitonOrbit orbit_;
};

// Crest of the y-averaged field: grid argmax refined by a parabola, ties
// resolved toward x = 0.
double crest_position(const Field& u, const Grid2D& grid);

// Energies ||P_n u||^2 of the y-modes n = 0..count-1.
std::vector<double> band_energies(const Spectrum& u_hat, const Fft2D& fft, int count);
double mass(const Field& u, const Grid2D& grid);
double energy(const Field& u, const Fft2D& fft);

struct UnstableData {
  Field u0;
  double mu_max = 0.0;
  Eigen::VectorXd chi;
};

// Q_c + delta chi(x) cos(k0 y / L) with chi the unit eigenfunction of
// D_x(L_c + k0^2/L^2) on the simulation x-grid for its largest positive
// eigenvalue.
UnstableData construct_unstable_data(double c, double L, int k0, double delta,
                                     const Grid2D& grid);

// Growth exponent of the mode-k0 L2 norm over t < (ln eps - ln delta)/(2 mu).
double measure_growth_rate(const std::vector<LedgerRow>& ledger, int k0, double mu_max,
                           double delta, double eps = 0.01);

// Smooth x-localised random field with unit H1 norm.
Field random_perturbation(const Grid2D& grid, std::uint64_t seed, double x_extent = 10.0);

struct OrbitalReport {
  double delta = 0.0;
  double threshold = 0.0;
  double max_distance = 0.0;
  std::optional<double> first_exceed_time;
  bool blow_up = false;
  bool stays_close = false;
};

OrbitalReport orbital_report(const std::vector<LedgerRow>& ledger, double delta);

}  // namespace zkls
