// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "core/bifurcation.hpp"
#include "core/fft.hpp"

namespace zkls {

struct ModulationState {
  double rho = 0.0;     // in the coordinates of the decomposed field
  double c_mod = 1.0;
  double a1 = 0.0;
  double a2 = 0.0;
  Field eta;
  std::array<double, 4> ortho_residuals{};
  double theta_norm = 0.0;
  int iterations = 0;
};

// Splits u(. + rho, .) = Theta(a, c) + eta with eta orthogonal to Theta,
// d_x Theta, d_{a1} Theta and d_{a2} Theta. Without a branch the profile is
// the line soliton Q_c and only (rho, c) are modulated.
ModulationState decompose(const Field& u, double c0, const BranchInterp* branch,
                          const Fft2D& fft);

// (||eta||_{H1} + |c - c0| + |a|) / dist_{c0}(u).
double modulation_bound_ratio(const Field& u, const ModulationState& mod, double c0,
                              const Fft2D& fft);

struct ModulationSample {
  double t = 0.0;
  double rho = 0.0;  // lab frame
  double c_mod = 1.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double eta_l2 = 0.0;
};

struct ModulationRates {
  std::vector<double> t;
  std::vector<double> a_ratio;
  std::vector<double> c_ratio;
  std::vector<double> rho_ratio;
  double k0_a = 0.0;
  double k0_c = 0.0;
  double k0_rho = 0.0;
  bool bounded = false;
};

// Centred-difference rates of (rho, c, a) against ||eta||. A ratio is NaN
// where its denominator is below 1e-12.
ModulationRates modulation_rates(const std::vector<ModulationSample>& samples, double c0,
                                 const BranchInterp* branch);

struct WeightProfile {
  double R = 4.0;
  double x0 = 10.0;
  double beta = 0.4;

  double psi(double x) const;
  double psi_prime(double x) const;
  double psi_third(double x) const;
};

// One recorded field in grid coordinates and the lab position of x = 0.
struct Snapshot {
  double t = 0.0;
  double lab_offset = 0.0;
  double crest = 0.0;  // lab frame
  Field u;
};

struct MonotonicitySeries {
  std::vector<double> t;
  std::vector<double> value;
  double violation = 0.0;  // max of the forbidden increase over the window
};

// I_{x0,t0}(u(t)) = int u^2 psi_R(x - rho(t0) + beta (t0 - t)/2 - x0) for
// t <= t0 and its violation max [I(t0) - I(t)]. The backward variant uses
// x - rho(t) + beta (t - t0)/2 + x0 for t >= t0 and max [I(t) - I(t0)].
MonotonicitySeries monotonicity_I(const std::vector<Snapshot>& run, const WeightProfile& w,
                                  std::size_t t0_index, const Fft2D& fft,
                                  bool backward = false);
// Same with the density |grad u|^2 - (2/3) u^3.
MonotonicitySeries monotonicity_J(const std::vector<Snapshot>& run, const WeightProfile& w,
                                  std::size_t t0_index, const Fft2D& fft);

struct DecayFit {
  std::vector<double> x0;
  std::vector<double> violation;
  double rate = 0.0;       // fitted kappa in C e^{-kappa x0}
  double prefactor = 0.0;  // fitted C
  bool valid = false;      // every violation positive
  bool trivial = false;    // no violation at all; the bound holds for any C
};
DecayFit fit_decay(const std::vector<double>& x0, const std::vector<double>& violation);

struct VirialRecord {
  Field v;
  Field s_prime;
  double s_prime_mismatch = 0.0;  // max |identity - direct evaluation|
  double weighted_tanh = 0.0;     // int (v + S')^2 phi_chat
  double x_weighted = 0.0;        // int x v^2
  double soliton_weighted = 0.0;  // int v^2 Q_{c0}
  double coupling = 0.0;          // |c - c0|^2 |a|^2
  double c_hat = 0.0;
};

VirialRecord virial_quantities(const ModulationState& mod, double c0,
                               const BranchInterp& branch, const Fft2D& fft);

// eps_+ = 0.5 k4 / (1 + C + c0 ||x^2 (Q')^2 / Q||_inf).
double virial_epsilon(double c0, double k4, double c_hat_const = 1.0);

struct CoercivitySample {
  double lhs = 0.0;
  double middle = 0.0;
  double rhs = 0.0;
  double weighted_l2 = 0.0;     // int 3 u^2 phi'
  double identity_error = 0.0;  // |lhs - middle| relative to |middle|
  double margin = 0.0;          // (middle - rhs) / int 3 u^2 phi'
};

// Both sides of the weighted coercivity identity and inequality for u.
CoercivitySample coercivity_sample(double c, const Eigen::VectorXd& u, const Grid1D& grid);

struct CoercivityReport {
  std::vector<CoercivitySample> samples;
  double max_identity_error = 0.0;
  double min_margin = 0.0;
  double k4 = 0.0;  // min middle / int 3 u^2 phi'
  bool pass = false;
};

// Random smooth compactly supported u on [-X/2, X/2], X = 40/sqrt(c).
CoercivityReport coercivity_check(double c, int samples, std::uint64_t seed = 7);

struct OrthogonalCoercivity {
  std::vector<double> ratios;
  double k2 = 0.0;
  bool pass = false;
};

// <(-Delta + c0 - 2 Theta) w, w> / ||w||_{H1}^2 over random w orthogonal to
// Theta, d_x Theta, d_{a1} Theta and d_{a2} Theta.
OrthogonalCoercivity orthogonal_coercivity(const BranchInterp& branch, double a1, double a2,
                                           int samples, std::uint64_t seed = 11);

}  // namespace zkls
