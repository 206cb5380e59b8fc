// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "core/error.hpp"
#include "core/simulator.hpp"
#include "core/soliton.hpp"

namespace zkls {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Profile {
  Field theta;
  Field dx;
  Field d_a1;
  Field d_a2;
};

Profile profile_at(double c, double a1, double a2, const BranchInterp* branch,
                   const Fft2D& fft) {
  Profile p;
  if (branch) {
    auto set = branch->theta(a1, a2, c, fft.grid(), true);
    p.theta = std::move(set.theta);
    p.d_a1 = std::move(set.d_a1);
    p.d_a2 = std::move(set.d_a2);
  } else {
    p.theta = line_soliton(c, fft.grid());
  }
  p.dx = fft.dx(p.theta);
  return p;
}

struct Residual {
  Eigen::VectorXd g;
  Field eta;
  Profile profile;
};

// params = (c, rho, a1, a2); the last two are ignored without a branch.
Residual residual(const Field& u, const Eigen::VectorXd& params, const BranchInterp* branch,
                  const Fft2D& fft) {
  const int m = branch ? 4 : 2;
  Residual r;
  const double a1 = branch ? params[2] : 0.0;
  const double a2 = branch ? params[3] : 0.0;
  r.profile = profile_at(params[0], a1, a2, branch, fft);
  r.eta = fft.shift_x(u, params[1]) - r.profile.theta;
  const auto& grid = fft.grid();
  r.g.resize(m);
  r.g[0] = inner(r.eta, r.profile.theta, grid);
  r.g[1] = inner(r.eta, r.profile.dx, grid);
  if (branch) {
    r.g[2] = inner(r.eta, r.profile.d_a1, grid);
    r.g[3] = inner(r.eta, r.profile.d_a2, grid);
  }
  return r;
}

}  // namespace

ModulationState decompose(const Field& u, double c0, const BranchInterp* branch,
                          const Fft2D& fft) {
  const auto& grid = fft.grid();
  require(u.rows() == grid.nx() && u.cols() == grid.n_y, ErrorKind::InvalidArgument,
          "decompose: field does not match the grid");
  if (branch) {
    require(std::abs(branch->grid().L - grid.L) <= 1e-12 * grid.L, ErrorKind::Precondition,
            "decompose: branch period differs from the field period");
  }

  const Field q0 = line_soliton(c0, grid);
  const double q_h1 = std::sqrt(h1_norm_squared(q0, fft));
  const double dist = SolitonOrbit(c0, grid).distance(u);
  require(dist < 0.3 * q_h1, ErrorKind::Precondition,
          "decompose: field is too far from the soliton orbit");

  const int m = branch ? 4 : 2;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(m);
  p[0] = c0;
  p[1] = crest_position(u, grid);
  if (branch) {
    const Field w = fft.shift_x(u, p[1]) - q0;
    const Field kc = kernel_cos(c0, grid);
    const Field ks = kernel_sin(c0, grid);
    p[2] = inner(w, kc, grid) / inner(kc, kc, grid);
    p[3] = inner(w, ks, grid) / inner(ks, ks, grid);
  }

  Residual r = residual(u, p, branch, fft);
  const double scale = inner(r.profile.theta, r.profile.theta, grid);
  const double tol = 1e-12 * std::max(1.0, scale);
  int it = 0;
  for (; it < 50; ++it) {
    const double gnorm = r.g.lpNorm<Eigen::Infinity>();
    if (gnorm <= tol) break;
    Eigen::MatrixXd jac(m, m);
    for (int k = 0; k < m; ++k) {
      const double h = k == 0 ? 1e-6 * p[0] : 1e-6;
      Eigen::VectorXd plus = p, minus = p;
      plus[k] += h;
      minus[k] -= h;
      jac.col(k) = (residual(u, plus, branch, fft).g - residual(u, minus, branch, fft).g) /
                   (2.0 * h);
    }
    const Eigen::VectorXd step = jac.fullPivLu().solve(r.g);
    require(step.allFinite(), ErrorKind::Numerical, "decompose: singular Jacobian");
    double t = 1.0;
    Residual trial;
    for (int back = 0; back < 8; ++back, t *= 0.5) {
      Eigen::VectorXd q = p - t * step;
      if (q[0] <= 0.0) continue;
      trial = residual(u, q, branch, fft);
      if (trial.g.lpNorm<Eigen::Infinity>() < gnorm) {
        p = q;
        break;
      }
    }
    if (trial.g.size() == 0 || !(trial.g.lpNorm<Eigen::Infinity>() < gnorm)) break;
    r = std::move(trial);
  }
  require(r.g.lpNorm<Eigen::Infinity>() <= 1e-8 * std::max(1.0, scale), ErrorKind::Numerical,
          "decompose: Newton did not converge");

  ModulationState s;
  s.c_mod = p[0];
  s.rho = p[1];
  if (branch) {
    s.a1 = p[2];
    s.a2 = p[3];
  }
  s.eta = std::move(r.eta);
  for (int k = 0; k < m; ++k) s.ortho_residuals[k] = std::abs(r.g[k]);
  s.theta_norm = std::sqrt(scale);
  s.iterations = it;
  return s;
}

double modulation_bound_ratio(const Field& u, const ModulationState& mod, double c0,
                              const Fft2D& fft) {
  const double dist = SolitonOrbit(c0, fft.grid()).distance(u);
  const double lhs = std::sqrt(h1_norm_squared(mod.eta, fft)) + std::abs(mod.c_mod - c0) +
                     std::hypot(mod.a1, mod.a2);
  return lhs / dist;
}

ModulationRates modulation_rates(const std::vector<ModulationSample>& samples, double c0,
                                 const BranchInterp* branch) {
  ModulationRates out;
  const auto ratio = [](double num, double den) { return den < 1e-12 ? kNaN : num / den; };
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const auto& s = samples[i];
    const double dt = samples[i + 1].t - samples[i - 1].t;
    const double da1 = (samples[i + 1].a1 - samples[i - 1].a1) / dt;
    const double da2 = (samples[i + 1].a2 - samples[i - 1].a2) / dt;
    const double dc = (samples[i + 1].c_mod - samples[i - 1].c_mod) / dt;
    const double drho = (samples[i + 1].rho - samples[i - 1].rho) / dt;
    const double amp = std::hypot(s.a1, s.a2);
    const double c_hat = branch ? s.c_mod * branch->c_of_a(amp) / c0 : s.c_mod;
    out.t.push_back(s.t);
    out.a_ratio.push_back(ratio(std::hypot(da1, da2), s.eta_l2));
    out.c_ratio.push_back(ratio(std::abs(dc), s.eta_l2));
    out.rho_ratio.push_back(
        ratio(std::abs(drho - c_hat), s.eta_l2 + std::abs(s.c_mod - c0) * amp));
  }
  // Bounded: the second half of the run does not exceed twice the first half.
  const auto trend = [&](const std::vector<double>& v, double& k0) {
    const std::size_t half = v.size() / 2;
    double first = 0.0, second = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v[i])) continue;
      (i < half ? first : second) = std::max(i < half ? first : second, v[i]);
    }
    k0 = std::max(first, second);
    return second <= 2.0 * first + 1e-12;
  };
  const bool ba = trend(out.a_ratio, out.k0_a);
  const bool bc = trend(out.c_ratio, out.k0_c);
  const bool br = trend(out.rho_ratio, out.k0_rho);
  out.bounded = !out.t.empty() && ba && bc && br;
  return out;
}

double WeightProfile::psi(double x) const {
  return 2.0 / std::numbers::pi * std::atan(std::exp(x / R));
}

double WeightProfile::psi_prime(double x) const {
  return 1.0 / (std::numbers::pi * R * std::cosh(x / R));
}

double WeightProfile::psi_third(double x) const {
  const double th = std::tanh(x / R);
  const double sech = 1.0 / std::cosh(x / R);
  return sech * (th * th - sech * sech) / (std::numbers::pi * R * R * R);
}

namespace {

void check_weight(const WeightProfile& w) {
  require(w.R > 0.0 && w.beta > 0.0, ErrorKind::InvalidArgument,
          "weight: R and beta must be positive");
  require(w.R >= 2.0 / std::sqrt(w.beta), ErrorKind::Precondition,
          "weight: R must be at least 2/sqrt(beta)");
}

double weighted(const Field& density, const Snapshot& s, const WeightProfile& w, double shift,
                const Grid2D& grid) {
  double sum = 0.0;
  for (int j = 0; j < grid.nx(); ++j) {
    const double psi = w.psi(grid.x.node(j) + s.lab_offset + shift);
    sum += psi * density.row(j).sum();
  }
  return sum * grid.cell_area();
}

template <class Density>
MonotonicitySeries monotonicity(const std::vector<Snapshot>& run, const WeightProfile& w,
                                std::size_t t0_index, const Fft2D& fft, bool backward,
                                Density density) {
  check_weight(w);
  require(t0_index < run.size(), ErrorKind::InvalidArgument, "monotonicity: t0 out of range");
  const auto& ref = run[t0_index];
  MonotonicitySeries out;
  const auto value = [&](const Snapshot& s) {
    const double shift = backward ? -s.crest + 0.5 * w.beta * (s.t - ref.t) + w.x0
                                  : -ref.crest + 0.5 * w.beta * (ref.t - s.t) - w.x0;
    return weighted(density(s.u), s, w, shift, fft.grid());
  };
  const double at_t0 = value(ref);
  double worst = -std::numeric_limits<double>::infinity();
  const std::size_t lo = backward ? t0_index : 0;
  const std::size_t hi = backward ? run.size() : t0_index + 1;
  for (std::size_t i = lo; i < hi; ++i) {
    const double v = i == t0_index ? at_t0 : value(run[i]);
    out.t.push_back(run[i].t);
    out.value.push_back(v);
    worst = std::max(worst, backward ? v - at_t0 : at_t0 - v);
  }
  out.violation = worst;
  return out;
}

}  // namespace

MonotonicitySeries monotonicity_I(const std::vector<Snapshot>& run, const WeightProfile& w,
                                  std::size_t t0_index, const Fft2D& fft, bool backward) {
  return monotonicity(run, w, t0_index, fft, backward,
                      [](const Field& u) -> Field { return u.array().square(); });
}

MonotonicitySeries monotonicity_J(const std::vector<Snapshot>& run, const WeightProfile& w,
                                  std::size_t t0_index, const Fft2D& fft) {
  return monotonicity(run, w, t0_index, fft, false, [&](const Field& u) -> Field {
    const Field ux = fft.dx(u);
    const Field uy = fft.dy(u);
    return ux.array().square() + uy.array().square() - (2.0 / 3.0) * u.array().cube();
  });
}

DecayFit fit_decay(const std::vector<double>& x0, const std::vector<double>& violation) {
  require(x0.size() == violation.size() && x0.size() >= 2, ErrorKind::InvalidArgument,
          "fit_decay: need at least two matching samples");
  DecayFit fit;
  fit.x0 = x0;
  fit.violation = violation;
  fit.valid = std::all_of(violation.begin(), violation.end(), [](double v) { return v > 0.0; });
  fit.trivial = std::all_of(violation.begin(), violation.end(), [](double v) { return v <= 0.0; });
  if (!fit.valid) return fit;
  const Eigen::Index n = static_cast<Eigen::Index>(x0.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = x0[i];
    b[i] = std::log(violation[i]);
  }
  const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(b);
  fit.prefactor = std::exp(coef[0]);
  fit.rate = -coef[1];
  return fit;
}

VirialRecord virial_quantities(const ModulationState& mod, double c0,
                               const BranchInterp& branch, const Fft2D& fft) {
  const auto& grid = fft.grid();
  const double amp = std::hypot(mod.a1, mod.a2);
  VirialRecord rec;
  rec.c_hat = mod.c_mod * branch.c_of_a(amp) / c0;

  const Field q_hat = line_soliton(rec.c_hat, grid);
  const Field& eta = mod.eta;
  rec.v = -fft.laplacian(eta) + rec.c_hat * eta - 2.0 * q_hat.cwiseProduct(eta) -
          eta.cwiseProduct(eta);

  const Field theta = branch.theta(mod.a1, mod.a2, mod.c_mod, grid, false).theta;
  const Field theta_yy = fft.dy(fft.dy(theta));
  rec.s_prime = ((mod.c_mod - c0) / c0) * theta_yy;
  const Field direct = -fft.laplacian(theta) + rec.c_hat * theta - theta.cwiseProduct(theta);
  rec.s_prime_mismatch = (direct - rec.s_prime).lpNorm<Eigen::Infinity>();

  const SolitonProfile sol_hat(rec.c_hat);
  const SolitonProfile sol0(c0);
  const Field vs = rec.v + rec.s_prime;
  double tanh_w = 0.0, x_w = 0.0, q_w = 0.0;
  for (int j = 0; j < grid.nx(); ++j) {
    const double x = grid.x.node(j);
    const double v2 = rec.v.row(j).squaredNorm();
    tanh_w += sol_hat.phi(x) * vs.row(j).squaredNorm();
    x_w += x * v2;
    q_w += sol0.q(x) * v2;
  }
  const double area = grid.cell_area();
  rec.weighted_tanh = tanh_w * area;
  rec.x_weighted = x_w * area;
  rec.soliton_weighted = q_w * area;
  rec.coupling = std::pow(mod.c_mod - c0, 2) * amp * amp;
  return rec;
}

double virial_epsilon(double c0, double k4, double c_hat_const) {
  const SolitonProfile sol(c0);
  // x^2 (Q')^2 / Q = x^2 c tanh^2 Q; its maximum is inside |x| < 20/sqrt(c).
  double sup = 0.0;
  const double span = 20.0 / std::sqrt(c0);
  for (int i = 0; i <= 20000; ++i) {
    const double x = span * i / 20000.0;
    const double th = std::tanh(0.5 * std::sqrt(c0) * x);
    sup = std::max(sup, x * x * c0 * th * th * sol.q(x));
  }
  return 0.5 * k4 / (1.0 + c_hat_const + c0 * sup);
}

CoercivitySample coercivity_sample(double c, const Eigen::VectorXd& u, const Grid1D& grid) {
  const int n = grid.n_points;
  require(u.size() == n, ErrorKind::InvalidArgument, "coercivity: size mismatch");
  const SolitonProfile sol(c);
  const Fft1D fft(n);
  const Eigen::VectorXd k = grid.wavenumbers();
  const auto deriv = [&](const Eigen::VectorXd& f, int order) {
    Eigen::VectorXcd f_hat = fft.forward(f);
    for (int p = 0; p < f_hat.size(); ++p) {
      const double kp = k[p];
      if (order == 1) {
        f_hat[p] *= (2 * p == n) ? 0.0 : std::complex<double>(0.0, kp);
      } else {
        f_hat[p] *= -kp * kp;
      }
    }
    return fft.inverse(f_hat);
  };

  Eigen::VectorXd q(n), phi(n), dphi(n);
  for (int j = 0; j < n; ++j) {
    const double x = grid.node(j);
    q[j] = sol.q(x);
    phi[j] = sol.phi(x);
    dphi[j] = sol.phi_prime(x);
  }
  const Eigen::VectorXd w = u.cwiseProduct(phi);
  const Eigen::VectorXd lw = -deriv(w, 2) + c * w - 2.0 * q.cwiseProduct(w);
  const Eigen::VectorXd ux = deriv(u, 1);
  const double h = grid.spacing();

  CoercivitySample s;
  s.lhs = -h * ux.dot(lw);
  const Eigen::VectorXd g = ux + u.cwiseProduct(phi);
  s.middle = 1.5 * h * g.cwiseProduct(g).dot(dphi);
  const double weighted_l2 = 3.0 * h * u.cwiseProduct(u).dot(dphi);
  const double proj = h * u.dot(q.cwiseProduct(q));
  s.rhs = 0.625 * c * (weighted_l2 - proj * proj / sol.moment_integral(3.0));
  s.weighted_l2 = weighted_l2;
  // Where the middle term vanishes (u proportional to Q) use the weighted norm.
  const double ref = std::abs(s.middle) > 1e-12 * weighted_l2 ? std::abs(s.middle) : weighted_l2;
  s.identity_error = std::abs(s.lhs - s.middle) / ref;
  s.margin = (s.middle - s.rhs) / weighted_l2;
  return s;
}

CoercivityReport coercivity_check(double c, int samples, std::uint64_t seed) {
  require(samples >= 10, ErrorKind::Precondition, "coercivity: need at least 10 samples");
  const Grid1D grid(40.0 / std::sqrt(c), 4096);
  const double half = 0.5 * grid.half_width;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  CoercivityReport rep;
  rep.k4 = std::numeric_limits<double>::infinity();
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(grid.n_points);
    const int bumps = 1 + static_cast<int>(4 * unit(rng));
    for (int b = 0; b < bumps; ++b) {
      const double width = (3.0 + 5.0 * unit(rng)) / std::sqrt(c);
      const double centre = (-half + width) + (2.0 * (half - width)) * unit(rng);
      const double amp = normal(rng);
      const double freq = 2.0 * unit(rng) * std::sqrt(c);
      for (int j = 0; j < grid.n_points; ++j) {
        const double z = (grid.node(j) - centre) / width;
        if (std::abs(z) >= 1.0) continue;
        u[j] += amp * std::exp(-1.0 / (1.0 - z * z)) * std::cos(freq * (grid.node(j) - centre));
      }
    }
    const auto cs = coercivity_sample(c, u, grid);
    rep.samples.push_back(cs);
    rep.max_identity_error = std::max(rep.max_identity_error, cs.identity_error);
    rep.min_margin = std::min(rep.min_margin, cs.margin);
    rep.k4 = std::min(rep.k4, cs.middle / cs.weighted_l2);
  }
  rep.pass = rep.max_identity_error <= 1e-8 && rep.min_margin >= -1e-10;
  return rep;
}

OrthogonalCoercivity orthogonal_coercivity(const BranchInterp& branch, double a1, double a2,
                                           int samples, std::uint64_t seed) {
  const Grid2D& grid = branch.grid();
  const Fft2D fft(grid);
  const double c0 = branch.c0();
  const auto set = branch.theta(a1, a2, c0, grid, true);
  std::vector<Field> basis = {set.theta, fft.dx(set.theta), set.d_a1, set.d_a2};
  // Gram-Schmidt so the projection below is exact.
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) basis[i] -= inner(basis[i], basis[j], grid) * basis[j];
    basis[i] /= std::sqrt(inner(basis[i], basis[i], grid));
  }

  OrthogonalCoercivity out;
  out.k2 = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    Field w = random_perturbation(grid, seed + static_cast<std::uint64_t>(s), 6.0 / std::sqrt(c0));
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) w -= inner(w, b, grid) * b;
    }
    const Field lw = -fft.laplacian(w) + c0 * w - 2.0 * set.theta.cwiseProduct(w);
    const double ratio = inner(lw, w, grid) / h1_norm_squared(w, fft);
    out.ratios.push_back(ratio);
    out.k2 = std::min(out.k2, ratio);
  }
  out.pass = samples > 0 && out.k2 > 0.0;
  return out;
}

}  // namespace zkls
