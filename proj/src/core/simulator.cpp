// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/simulator.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "core/bifurcation.hpp"
#include "core/error.hpp"
#include "core/soliton.hpp"
#include "core/spectral.hpp"

namespace zkls {

using std::numbers::pi;
using cplx = std::complex<double>;

void SimConfig::validate() const {
  require(std::isfinite(c) && c > 0.0, ErrorKind::InvalidArgument,
          "soliton speed c must be positive");
  require(std::isfinite(dt) && dt > 0.0, ErrorKind::InvalidArgument,
          "time step must be positive");
  require(dt <= 0.01 / c * (1.0 + 1e-12), ErrorKind::Precondition,
          "time step must satisfy dt <= 0.01/c");
  require(std::isfinite(t_end) && t_end >= 0.0, ErrorKind::InvalidArgument,
          "t_end must be non-negative");
  require(record_every >= 1, ErrorKind::InvalidArgument, "record_every must be >= 1");
  grid.x.check_resolves(c);
}

// ---------------------------------------------------------------------------

SolitonOrbit::SolitonOrbit(double c, const Grid2D& grid)
    : grid_(grid), fft_(grid.nx()), fft2_(std::make_unique<Fft2D>(grid)) {
  const SolitonProfile q(c);
  Eigen::VectorXd samples(grid.nx());
  for (int j = 0; j < grid.nx(); ++j) samples[j] = q.q(grid.x.node(j));
  q_hat_ = fft_.forward(samples);
  const Eigen::VectorXd k = grid.x.wavenumbers();
  double sum = 0.0;
  const int n = grid.nx();
  for (int p = 0; p <= n / 2; ++p) {
    const double w = (p == 0 || p == n / 2) ? 1.0 : 2.0;
    const double k2 = p == n / 2 ? 0.0 : k[p] * k[p];
    sum += w * (1.0 + k2) * std::norm(q_hat_[p]);
  }
  q_h1_sq_ = sum * grid.x.spacing() / n * 2.0 * pi * grid.L;
}

double SolitonOrbit::distance(const Field& u, double* shift) const {
  const int n = grid_.nx();
  const double h = grid_.x.spacing();
  const Eigen::VectorXd ubar = u.rowwise().sum() * grid_.hy();
  const Eigen::VectorXcd u_hat = fft_.forward(ubar);
  const Eigen::VectorXd k = grid_.x.wavenumbers();

  Eigen::VectorXcd t(n / 2 + 1);
  for (int p = 0; p <= n / 2; ++p) {
    const double k2 = p == n / 2 ? 0.0 : k[p] * k[p];
    t[p] = (1.0 + k2) * u_hat[p] * std::conj(q_hat_[p]);
  }
  // Cross term <u, Q(. - x0)>_{H1} at every grid shift x0 = m h.
  const Eigen::VectorXd cross = fft_.inverse(t) * h;
  Eigen::Index m = 0;
  cross.maxCoeff(&m);

  auto cross_at = [&](double x0) {
    double s = t[0].real();
    for (int p = 1; p < n / 2; ++p) s += 2.0 * (t[p] * std::polar(1.0, k[p] * x0)).real();
    s += t[n / 2].real() * std::cos(k[n / 2] * x0);
    return s * h / n;
  };
  const double centre = m <= n / 2 ? m * h : (m - n) * h;
  const auto best = boost::math::tools::brent_find_minima(
      [&](double x0) { return -cross_at(x0); }, centre - h, centre + h, 40);

  const double u_h1 = h1_norm_squared(u, *fft2_);
  const double d2 = u_h1 + q_h1_sq_ + 2.0 * best.second;
  if (shift) *shift = best.first;
  return std::sqrt(std::max(0.0, d2));
}

// ---------------------------------------------------------------------------

struct Simulator::Coefficients {
  Spectrum e, e2, q, f1, f2, f3;
  Spectrum ikx;   // i k_x with the Nyquist row removed
  Eigen::MatrixXd mask;
};

Simulator::Simulator(SimConfig config)
    : config_((config.validate(), config)),
      fft_(std::make_unique<Fft2D>(config_.grid)),
      coef_(std::make_unique<Coefficients>()),
      orbit_(config_.orbit_speed.value_or(config_.c), config_.grid) {
  const int rows = fft_->kx_count();
  const int cols = config_.grid.n_y;
  const int nx = config_.grid.nx();
  const int ny = config_.grid.n_y;
  auto& k = *coef_;
  for (Spectrum* s : {&k.e, &k.e2, &k.q, &k.f1, &k.f2, &k.f3, &k.ikx}) s->resize(rows, cols);
  k.mask = Eigen::MatrixXd::Ones(rows, cols);

  // Kassam-Trefethen contour means for the phi-functions of each symbol.
  constexpr int kContour = 32;
  std::vector<cplx> roots(kContour);
  for (int j = 0; j < kContour; ++j) roots[j] = std::polar(1.0, pi * (j + 0.5) / kContour * 2.0);

  const double dt = config_.dt;
  const double frame = config_.c;
  for (int l = 0; l < cols; ++l) {
    const double ky = fft_->ky()[l];
    const int my = fft_->y_mode(l);
    for (int p = 0; p < rows; ++p) {
      const double kx = fft_->kx()[p];
      const bool nyquist = p == nx / 2 || l == ny / 2;
      // Co-moving frame: u_t = c u_x - d_x Delta u - d_x(u^2).
      const cplx lin = nyquist ? cplx(0.0) : cplx(0.0, kx * (kx * kx + ky * ky + frame));
      const cplx z0 = lin * dt;
      k.e(p, l) = std::exp(z0);
      k.e2(p, l) = std::exp(0.5 * z0);
      cplx q = 0.0, f1 = 0.0, f2 = 0.0, f3 = 0.0;
      for (const cplx r : roots) {
        const cplx z = z0 + r;
        const cplx ez = std::exp(z);
        const cplx z3 = z * z * z;
        q += (std::exp(0.5 * z) - 1.0) / z;
        f1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
        f2 += (2.0 + z + ez * (z - 2.0)) / z3;
        f3 += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
      }
      k.q(p, l) = dt * q / double(kContour);
      k.f1(p, l) = dt * f1 / double(kContour);
      k.f2(p, l) = dt * f2 / double(kContour);
      k.f3(p, l) = dt * f3 / double(kContour);
      k.ikx(p, l) = p == nx / 2 ? cplx(0.0) : cplx(0.0, kx);
      if (nyquist) k.mask(p, l) = 0.0;
      if (config_.dealias && (3 * p > nx || 3 * std::abs(my) > ny)) k.mask(p, l) = 0.0;
    }
  }
}

Simulator::~Simulator() = default;

Spectrum Simulator::nonlinear(const Spectrum& v, bool check) const {
  const Field u = fft_->inverse(v);
  if (check) {
    const double peak = u.cwiseAbs().maxCoeff();
    if (!std::isfinite(peak) || peak > 1e6) {
      std::ostringstream os;
      os << "solution blew up (max |u| = " << peak << ")";
      fail(ErrorKind::Numerical, os.str());
    }
  }
  Spectrum w = fft_->forward(u.cwiseProduct(u));
  return -(coef_->ikx.array() * coef_->mask.array().cast<cplx>() * w.array()).matrix();
}

SimState Simulator::initial_state(const Field& u0) const {
  SimState s;
  s.u_hat = fft_->forward(u0);
  enforce_real_symmetry(s.u_hat);
  return s;
}

void Simulator::step(SimState& state) const {
  const auto& k = *coef_;
  const Spectrum& v = state.u_hat;
  const Spectrum nv = nonlinear(v, true);
  const Spectrum a = (k.e2.array() * v.array() + k.q.array() * nv.array()).matrix();
  const Spectrum na = nonlinear(a, false);
  const Spectrum b = (k.e2.array() * v.array() + k.q.array() * na.array()).matrix();
  const Spectrum nb = nonlinear(b, false);
  const Spectrum cc =
      (k.e2.array() * a.array() + k.q.array() * (2.0 * nb.array() - nv.array())).matrix();
  const Spectrum nc = nonlinear(cc, false);
  state.u_hat = (k.e.array() * v.array() + nv.array() * k.f1.array() +
                 2.0 * (na.array() + nb.array()) * k.f2.array() + nc.array() * k.f3.array())
                    .matrix();
  enforce_real_symmetry(state.u_hat);
  ++state.steps;
  state.t = state.steps * config_.dt;
}

Field Simulator::field(const SimState& state) const { return fft_->inverse(state.u_hat); }

double Simulator::lab_offset(const SimState& state) const {
  return state.frame_shift + config_.c * state.t;
}

void Simulator::recenter(SimState& state) const {
  const Field u = field(state);
  const double h = config_.grid.x.spacing();
  const double crest = crest_position(u, config_.grid);
  const long cells = std::lround(crest / h);
  if (cells == 0) return;
  // u_new(x) = u(x + cells h) keeps the band-limited field exactly.
  const double s = cells * h;
  for (int p = 0; p < state.u_hat.rows(); ++p) {
    state.u_hat.row(p) *= std::polar(1.0, fft_->kx()[p] * s);
  }
  enforce_real_symmetry(state.u_hat);
  state.frame_shift += s;
}

LedgerRow Simulator::measure(const SimState& state) const {
  const Field u = field(state);
  LedgerRow row;
  row.t = state.t;
  row.mass = mass(u, config_.grid);
  row.energy = energy(u, *fft_);
  const auto bands = band_energies(state.u_hat, *fft_, kLedgerBands);
  for (int n = 0; n < kLedgerBands; ++n) row.band[n] = bands[n];
  row.crest = crest_position(u, config_.grid) + lab_offset(state);
  row.orbit_distance = orbit_.distance(u);
  return row;
}

void Simulator::run(SimState& state, const Observer& observer) const {
  const auto total = static_cast<std::int64_t>(std::llround(config_.t_end / config_.dt));
  auto record = [&] {
    recenter(state);
    state.ledger.push_back(measure(state));
    if (observer) observer(state, field(state));
  };
  if (state.ledger.empty() || state.ledger.back().t != state.t) record();
  while (state.steps < total) {
    step(state);
    if (state.steps % config_.record_every == 0 || state.steps == total) record();
  }
}

// ---------------------------------------------------------------------------

double crest_position(const Field& u, const Grid2D& grid) {
  const Eigen::VectorXd avg = u.rowwise().mean();
  const int n = grid.nx();
  int best = 0;
  for (int j = 1; j < n; ++j) {
    if (avg[j] > avg[best] ||
        (avg[j] == avg[best] && std::abs(grid.x.node(j)) < std::abs(grid.x.node(best)))) {
      best = j;
    }
  }
  const double fm = avg[(best + n - 1) % n];
  const double f0 = avg[best];
  const double fp = avg[(best + 1) % n];
  const double denom = fm - 2.0 * f0 + fp;
  double offset = 0.0;
  if (denom < 0.0) offset = std::clamp(0.5 * (fm - fp) / denom, -0.5, 0.5);
  return grid.x.node(best) + offset * grid.x.spacing();
}

std::vector<double> band_energies(const Spectrum& u_hat, const Fft2D& fft, int count) {
  const Grid2D& g = fft.grid();
  const int nx = g.nx();
  const int ny = g.n_y;
  const double scale = g.cell_area() / (double(nx) * ny);
  std::vector<double> out(count, 0.0);
  for (int l = 0; l < ny; ++l) {
    const int n = std::abs(fft.y_mode(l));
    if (n >= count) continue;
    double s = 0.0;
    for (int p = 0; p <= nx / 2; ++p) {
      const double w = (p == 0 || p == nx / 2) ? 1.0 : 2.0;
      s += w * std::norm(u_hat(p, l));
    }
    out[n] += s * scale;
  }
  return out;
}

double mass(const Field& u, const Grid2D& grid) { return inner(u, u, grid); }

double energy(const Field& u, const Fft2D& fft) {
  const Grid2D& g = fft.grid();
  const Field ux = fft.dx(u);
  const Field uy = fft.dy(u);
  return 0.5 * (inner(ux, ux, g) + inner(uy, uy, g)) -
         u.array().cube().sum() * g.cell_area() / 3.0;
}

UnstableData construct_unstable_data(double c, double L, int k0, double delta,
                                     const Grid2D& grid) {
  require(k0 >= 1, ErrorKind::InvalidArgument, "k0 must be at least 1");
  require(std::isfinite(delta) && delta > 0.0, ErrorKind::InvalidArgument,
          "delta must be positive");
  require(std::abs(grid.L - L) <= 1e-12 * L, ErrorKind::InvalidArgument,
          "grid torus size does not match L");
  require(2 * k0 < grid.n_y, ErrorKind::InvalidArgument, "k0 is not resolved by the y grid");
  const double a = double(k0) * k0 / (L * L);
  require(a < 1.25 * c, ErrorKind::Precondition,
          "no unstable transverse mode: k0^2/L^2 >= 5c/4");

  const auto op = build_dx_lc(c, a, grid.x);
  const auto pairs = eigen_extremal(op, 1);
  const EigenPair& top = pairs.front();
  require(top.value.real() > kSpuriousRealPart, ErrorKind::Numerical,
          "no positive eigenvalue found for the transverse mode");

  UnstableData out;
  out.mu_max = top.value.real();
  out.chi = top.vector.real();
  out.chi /= std::sqrt(grid.x.spacing() * out.chi.squaredNorm());
  out.u0 = line_soliton(c, grid);
  for (int l = 0; l < grid.n_y; ++l) {
    out.u0.col(l) += delta * std::cos(k0 * grid.y_node(l) / L) * out.chi;
  }
  return out;
}

double measure_growth_rate(const std::vector<LedgerRow>& ledger, int k0, double mu_max,
                           double delta, double eps) {
  require(k0 >= 1 && k0 < kLedgerBands, ErrorKind::InvalidArgument,
          "k0 must index a recorded band");
  require(mu_max > 0.0 && delta > 0.0 && eps > delta, ErrorKind::InvalidArgument,
          "growth window needs mu_max > 0 and delta < eps");
  const double t_max = (std::log(eps) - std::log(delta)) / (2.0 * mu_max);
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  int n = 0;
  for (const auto& row : ledger) {
    if (row.t >= t_max) break;
    const double y = 0.5 * std::log(row.band[k0]);
    st += row.t;
    sy += y;
    stt += row.t * row.t;
    sty += row.t * y;
    ++n;
  }
  require(n >= 10, ErrorKind::Precondition,
          "growth fit window holds fewer than 10 samples");
  return (n * sty - st * sy) / (n * stt - st * st);
}

Field random_perturbation(const Grid2D& grid, std::uint64_t seed, double x_extent) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(-x_extent, x_extent);
  const int modes = std::min(4, grid.n_y / 3);
  Field u = Field::Zero(grid.nx(), grid.n_y);
  for (int bump = 0; bump < 6; ++bump) {
    const double centre = uniform(rng);
    const double width = 1.0 + 2.0 * std::abs(normal(rng)) / 3.0;
    for (int n = 0; n <= modes; ++n) {
      const double ac = normal(rng) / (1.0 + n);
      const double as = n == 0 ? 0.0 : normal(rng) / (1.0 + n);
      for (int l = 0; l < grid.n_y; ++l) {
        const double y = grid.y_node(l) / grid.L;
        const double wy = ac * std::cos(n * y) + as * std::sin(n * y);
        for (int j = 0; j < grid.nx(); ++j) {
          const double z = (grid.x.node(j) - centre) / width;
          u(j, l) += wy * std::exp(-0.5 * z * z);
        }
      }
    }
  }
  const Fft2D fft(grid);
  return u / std::sqrt(h1_norm_squared(u, fft));
}

OrbitalReport orbital_report(const std::vector<LedgerRow>& ledger, double delta) {
  OrbitalReport r;
  r.delta = delta;
  r.threshold = 10.0 * delta;
  for (const auto& row : ledger) {
    if (!std::isfinite(row.orbit_distance)) continue;
    r.max_distance = std::max(r.max_distance, row.orbit_distance);
    if (!r.first_exceed_time && row.orbit_distance > r.threshold) r.first_exceed_time = row.t;
  }
  r.stays_close = !r.first_exceed_time;
  return r;
}

}  // namespace zkls
