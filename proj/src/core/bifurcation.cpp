// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/bifurcation.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "core/error.hpp"
#include "core/soliton.hpp"

namespace zkls {

using std::numbers::pi;

namespace {

// Fields even in x live on the nodes j = 0..nx/2; node nx - j mirrors j.
struct EvenGrid {
  int nx = 0;
  int nh = 0;
  int ny = 0;
  double area = 0.0;          // h_x h_y
  Eigen::MatrixXd d2x;        // folded x second derivative, nh x nh
  Eigen::MatrixXd d2y;        // ny x ny
  Eigen::MatrixXd weight;     // trapezoid weights including the mirror images

  explicit EvenGrid(const Grid2D& g) {
    nx = g.nx();
    nh = nx / 2 + 1;
    ny = g.n_y;
    area = g.cell_area();
    const Eigen::MatrixXd full = fourier_d2(g.x);
    d2x = Eigen::MatrixXd::Zero(nh, nh);
    for (int r = 0; r < nh; ++r) {
      for (int i = 0; i < nx; ++i) d2x(r, mirror(i)) += full(r, i);
    }
    d2y = fourier_d2(ny, pi * g.L);
    weight = Eigen::MatrixXd::Constant(nh, ny, 2.0);
    weight.row(0).setConstant(1.0);
    weight.row(nh - 1).setConstant(1.0);
  }

  int mirror(int i) const { return i <= nx / 2 ? i : nx - i; }

  Eigen::MatrixXd fold(const Field& f) const { return f.topRows(nh); }

  Field unfold(const Eigen::MatrixXd& r) const {
    Field f(nx, ny);
    for (int i = 0; i < nx; ++i) f.row(i) = r.row(mirror(i));
    return f;
  }

  double inner(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) const {
    return (weight.array() * u.array() * v.array()).sum() * area;
  }

  Eigen::MatrixXd laplacian(const Eigen::MatrixXd& u) const {
    return d2x * u + u * d2y.transpose();
  }
};

Eigen::VectorXd flat(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd shaped(const Eigen::VectorXd& v, int rows, int cols) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

Field sample_y(double c, const Grid2D& grid, double power, double (*fy)(double)) {
  const SolitonProfile q(c);
  Field f(grid.nx(), grid.n_y);
  for (int l = 0; l < grid.n_y; ++l) {
    const double w = fy(grid.y_node(l) / grid.L);
    for (int j = 0; j < grid.nx(); ++j) f(j, l) = q.q_pow(grid.x.node(j), power) * w;
  }
  return f;
}

double one(double) { return 1.0; }
double cos_fn(double t) { return std::cos(t); }
double sin_fn(double t) { return std::sin(t); }

// Least-squares fit of data rows against powers r^{p0 + 2k}, k < terms.
Eigen::MatrixXd fit_powers(const std::vector<double>& r, const Eigen::MatrixXd& data,
                           int p0, int terms, double r_scale) {
  const int m = static_cast<int>(r.size());
  Eigen::MatrixXd v(m, terms);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < terms; ++k) v(i, k) = std::pow(r[i] / r_scale, p0 + 2 * k);
  }
  Eigen::MatrixXd coef = v.colPivHouseholderQr().solve(data);
  for (int k = 0; k < terms; ++k) coef.row(k) /= std::pow(r_scale, p0 + 2 * k);
  return coef;
}

}  // namespace

Grid2D critical_grid(double c0, int nx, int n_y) {
  require(std::isfinite(c0) && c0 > 0.0, ErrorKind::InvalidArgument,
          "c0 must be positive");
  return Grid2D(Grid1D(40.0 / std::sqrt(c0), nx), n_y, 2.0 / std::sqrt(5.0 * c0));
}

Field kernel_cos(double c0, const Grid2D& grid) { return sample_y(c0, grid, 1.5, cos_fn); }
Field kernel_sin(double c0, const Grid2D& grid) { return sample_y(c0, grid, 1.5, sin_fn); }
Field line_soliton(double c, const Grid2D& grid) { return sample_y(c, grid, 1.0, one); }

double BranchPoint::amplitude() const { return std::hypot(a1, a2); }

BranchPoint solve_branch(double c0, double a1, const Grid2D& grid, double a2,
                         const BranchPoint* seed, const BranchOptions& options) {
  require(std::isfinite(c0) && c0 > 0.0, ErrorKind::InvalidArgument,
          "c0 must be positive");
  require(std::abs(grid.L - 2.0 / std::sqrt(5.0 * c0)) <= 1e-12,
          ErrorKind::Precondition, "branch grid L must equal 2/sqrt(5 c0)");
  const double amp = std::hypot(a1, a2);
  require(amp <= 0.3 * std::sqrt(c0), ErrorKind::Precondition,
          "branch amplitude exceeds 0.3 sqrt(c0)");
  grid.x.check_resolves(c0);

  const EvenGrid eg(grid);
  const Eigen::MatrixXd q = eg.fold(line_soliton(c0, grid));
  const Eigen::MatrixXd kc = eg.fold(kernel_cos(c0, grid));
  const Eigen::MatrixXd ks = eg.fold(kernel_sin(c0, grid));
  const double kc2 = eg.inner(kc, kc);
  const double ks2 = eg.inner(ks, ks);

  BranchPoint out;
  out.a1 = a1;
  out.a2 = a2;
  out.c0 = c0;

  auto residual = [&](const Eigen::MatrixXd& phi, double c) -> Eigen::MatrixXd {
    return -eg.laplacian(phi) + c * phi - phi.cwiseProduct(phi);
  };

  if (amp == 0.0) {
    out.c_of_a = c0;
    out.field = eg.unfold(q);
    const Eigen::MatrixXd f = residual(q, c0);
    out.residual_norm = std::sqrt(eg.inner(f, f));
    out.field_norm = std::sqrt(eg.inner(q, q));
    out.residual_history = {out.residual_norm};
    out.d_a1 = eg.unfold(kc);
    out.d_a2 = eg.unfold(ks);
    return out;
  }

  // The multiplier direction is the infinitesimal y-translation of the
  // kernel part; it absorbs the cokernel left by translation invariance.
  const Eigen::MatrixXd t = (-a2 * kc + a1 * ks) / amp;

  Eigen::MatrixXd phi;
  double c = c0;
  if (seed != nullptr) {
    phi = eg.fold(seed->field) + (a1 - seed->a1) * eg.fold(seed->d_a1) +
          (a2 - seed->a2) * eg.fold(seed->d_a2);
    c = seed->c_of_a + (a1 - seed->a1) * seed->dc_da1 + (a2 - seed->a2) * seed->dc_da2;
  } else {
    phi = q + a1 * kc + a2 * ks;
  }
  double s = 0.0;

  const int nh = eg.nh;
  const int ny = eg.ny;
  const int m = nh * ny;
  Eigen::MatrixXd base = Eigen::MatrixXd::Zero(m + 2, m + 2);
  for (int l = 0; l < ny; ++l) base.block(l * nh, l * nh, nh, nh) = -eg.d2x;
  for (int l = 0; l < ny; ++l) {
    for (int lp = 0; lp < ny; ++lp) {
      for (int r = 0; r < nh; ++r) base(r + nh * l, r + nh * lp) -= eg.d2y(l, lp);
    }
  }
  base.block(m, 0, 1, m) = flat(eg.weight.cwiseProduct(kc)).transpose() * eg.area;
  base.block(m + 1, 0, 1, m) = flat(eg.weight.cwiseProduct(ks)).transpose() * eg.area;
  base.block(0, m + 1, m, 1) = flat(t);

  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  double res_norm = 0.0;
  double phi_norm = 1.0;
  bool converged = false;
  for (int it = 0; it <= options.max_iterations; ++it) {
    const Eigen::MatrixXd f = residual(phi, c) + s * t;
    const double g1 = eg.inner(phi - q, kc) - a1 * kc2;
    const double g2 = eg.inner(phi - q, ks) - a2 * ks2;
    phi_norm = std::sqrt(eg.inner(phi, phi));
    res_norm = std::sqrt(eg.inner(f, f));
    out.residual_history.push_back(res_norm + std::abs(g1) + std::abs(g2));
    if (res_norm <= options.tolerance * phi_norm &&
        std::abs(g1) + std::abs(g2) <= options.tolerance * kc2) {
      converged = true;
      break;
    }
    if (it == options.max_iterations) break;
    // Stop at the rounding floor: a step that does not reduce the residual.
    if (it >= 2 && out.residual_history[it] > 0.5 * out.residual_history[it - 1] &&
        res_norm <= 1e-9 * phi_norm) {
      break;
    }

    Eigen::MatrixXd jac = base;
    const Eigen::VectorXd diag = flat(Eigen::MatrixXd::Constant(nh, ny, c) - 2.0 * phi);
    jac.topLeftCorner(m, m).diagonal() += diag;
    jac.block(0, m, m, 1) = flat(phi);
    lu.compute(jac);

    Eigen::VectorXd rhs(m + 2);
    rhs.head(m) = -flat(f);
    rhs[m] = -g1;
    rhs[m + 1] = -g2;
    const Eigen::VectorXd step = lu.solve(rhs);
    require(step.allFinite(), ErrorKind::Numerical, "branch Newton step is not finite");
    phi += shaped(step.head(m), nh, ny);
    c += step[m];
    s += step[m + 1];
  }

  const Eigen::MatrixXd f = residual(phi, c);
  out.residual_norm = std::sqrt(eg.inner(f, f));
  out.field_norm = std::sqrt(eg.inner(phi, phi));
  if (!converged && out.residual_norm > 1e-9 * out.field_norm) {
    std::ostringstream os;
    os << "branch Newton did not converge at a = (" << a1 << ", " << a2
       << "): residual " << out.residual_norm;
    fail(ErrorKind::Numerical, os.str());
  }
  out.c_of_a = c;
  out.field = eg.unfold(phi);

  // Tangent vectors from the Jacobian at the solution.
  Eigen::MatrixXd jac = base;
  jac.topLeftCorner(m, m).diagonal() +=
      flat(Eigen::MatrixXd::Constant(nh, ny, c) - 2.0 * phi);
  jac.block(0, m, m, 1) = flat(phi);
  lu.compute(jac);
  const Eigen::MatrixXd dt_da1 = ks / amp - a1 * t / (amp * amp);
  const Eigen::MatrixXd dt_da2 = -kc / amp - a2 * t / (amp * amp);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 2);
  rhs.head(m) = -s * flat(dt_da1);
  rhs[m] = kc2;
  Eigen::VectorXd d1 = lu.solve(rhs);
  rhs.head(m) = -s * flat(dt_da2);
  rhs[m] = 0.0;
  rhs[m + 1] = ks2;
  Eigen::VectorXd d2 = lu.solve(rhs);
  out.d_a1 = eg.unfold(shaped(d1.head(m), nh, ny));
  out.d_a2 = eg.unfold(shaped(d2.head(m), nh, ny));
  out.dc_da1 = d1[m];
  out.dc_da2 = d2[m];
  return out;
}

std::vector<BranchPoint> continue_branch(double c0, std::span<const double> amplitudes,
                                         const Grid2D& grid, double theta,
                                         const BranchOptions& options) {
  std::vector<BranchPoint> out;
  out.reserve(amplitudes.size());
  for (const double r : amplitudes) {
    const BranchPoint* seed = out.empty() ? nullptr : &out.back();
    out.push_back(solve_branch(c0, r * std::cos(theta), grid, r * std::sin(theta),
                               seed, options));
  }
  return out;
}

C2Estimate compute_c2_constant(double c0, std::span<const BranchPoint> branch,
                               const Grid2D& grid) {
  std::vector<double> r;
  for (const auto& p : branch) {
    const double a = p.amplitude();
    if (a == 0.0) continue;
    for (double seen : r) {
      require(std::abs(seen - a) > 1e-12, ErrorKind::Precondition,
              "branch amplitudes must be distinct");
    }
    r.push_back(a);
  }
  require(r.size() >= 4, ErrorKind::Precondition,
          "C2 needs at least four branch points with distinct non-zero |a|");

  const SolitonProfile q(c0);
  C2Estimate out;
  out.norm_q_sq = 2.0 * pi * grid.L * q.moment_integral(2.0);
  out.norm_k_sq = pi * grid.L * q.moment_integral(3.0);

  const Field q_field = line_soliton(c0, grid);
  const double m0 = inner(q_field, q_field, grid);
  const int m = static_cast<int>(r.size());
  Eigen::MatrixXd dc(m, 1), dm(m, 1);
  int i = 0;
  for (const auto& p : branch) {
    if (p.amplitude() == 0.0) continue;
    dc(i, 0) = p.c_of_a - c0;
    dm(i, 0) = inner(p.field, p.field, grid) - m0;
    ++i;
  }
  double r_max = 0.0;
  for (double a : r) r_max = std::max(r_max, a);
  const Eigen::MatrixXd cc = fit_powers(r, dc, 2, 2, r_max);
  const Eigen::MatrixXd mc = fit_powers(r, dm, 2, 2, r_max);
  out.c_second = 2.0 * cc(0, 0);
  out.from_curvature =
      1.5 * out.c_second * out.norm_q_sq / c0 - 2.5 * out.norm_k_sq;
  out.from_mass = 2.0 * mc(0, 0);

  const double rel = std::abs(out.from_curvature - out.from_mass) /
                     std::max(std::abs(out.from_curvature), std::abs(out.from_mass));
  if (!(rel <= 0.10)) {
    std::ostringstream os;
    os << "C2 estimators disagree: curvature " << out.from_curvature << ", mass "
       << out.from_mass;
    fail(ErrorKind::Numerical, os.str());
  }
  return out;
}

BranchInterp::BranchInterp(double c0, const Grid2D& grid,
                           std::span<const BranchPoint> axis_points)
    : c0_(c0), grid_(grid) {
  std::vector<const BranchPoint*> pts;
  for (const auto& p : axis_points) {
    require(std::abs(p.a2) <= 1e-14 && p.a1 >= 0.0, ErrorKind::InvalidArgument,
            "interpolation points must lie on the positive a1 axis");
    require(p.field.rows() == grid.nx() && p.field.cols() == grid.n_y,
            ErrorKind::InvalidArgument, "branch field does not match the grid");
    if (p.a1 > 0.0) pts.push_back(&p);
  }
  const int m = static_cast<int>(pts.size());
  require(m >= 3, ErrorKind::Precondition,
          "branch interpolation needs at least three non-zero amplitudes");
  terms_ = std::min(4, m);
  n_modes_ = grid.n_y / 2;
  const int nx = grid.nx();
  const int ny = grid.n_y;

  std::vector<double> r(m);
  for (int i = 0; i < m; ++i) {
    r[i] = pts[i]->a1;
    r_max_ = std::max(r_max_, r[i]);
  }

  // Cosine coefficients in y of every sample; the a1-axis branch is even in y.
  const Eigen::VectorXd q = line_soliton(c0, grid).col(0);
  std::vector<Eigen::MatrixXd> data(n_modes_, Eigen::MatrixXd(m, nx));
  for (int i = 0; i < m; ++i) {
    for (int n = 0; n < n_modes_; ++n) {
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(nx);
      for (int l = 0; l < ny; ++l) {
        acc += pts[i]->field.col(l) * std::cos(n * grid.y_node(l) / grid.L);
      }
      acc *= (n == 0 ? 1.0 : 2.0) / ny;
      if (n == 0) acc -= q;
      data[n].row(i) = acc.transpose();
    }
  }

  coeff_.assign(n_modes_, std::vector<Eigen::VectorXd>(terms_ + 1, Eigen::VectorXd::Zero(nx)));
  for (int n = 0; n < n_modes_; ++n) {
    if (n == 0) {
      const Eigen::MatrixXd c = fit_powers(r, data[0], 2, terms_, r_max_);
      coeff_[0][0] = q;
      for (int k = 0; k < terms_; ++k) coeff_[0][k + 1] = c.row(k).transpose();
    } else {
      const Eigen::MatrixXd c = fit_powers(r, data[n], n, terms_, r_max_);
      for (int k = 0; k < terms_; ++k) coeff_[n][k] = c.row(k).transpose();
    }
  }

  Eigen::MatrixXd dc(m, 1);
  for (int i = 0; i < m; ++i) dc(i, 0) = pts[i]->c_of_a - c0;
  const Eigen::MatrixXd cf = fit_powers(r, dc, 2, std::min(3, m), r_max_);
  c_fit_ = Eigen::VectorXd::Zero(3);
  for (int k = 0; k < cf.rows(); ++k) c_fit_[k] = cf(k, 0);
}

double BranchInterp::c_of_a(double amplitude) const {
  const double r2 = amplitude * amplitude;
  return c0_ + r2 * (c_fit_[0] + r2 * (c_fit_[1] + r2 * c_fit_[2]));
}

BranchInterp::ThetaSet BranchInterp::theta(double a1, double a2, double c,
                                           const Grid2D& target, bool derivatives) const {
  require(std::isfinite(c) && c > 0.0, ErrorKind::InvalidArgument, "c must be positive");
  require(std::abs(target.L - grid_.L) <= 1e-12, ErrorKind::Precondition,
          "Theta target grid must share the branch torus size");
  const double s = std::sqrt(c / c0_);
  const int nt = target.nx();
  const bool same = s == 1.0 && target.x.half_width == grid_.x.half_width &&
                    target.nx() == grid_.nx();
  Eigen::MatrixXd interp;
  Eigen::VectorXd q_scaled;
  if (!same) {
    // The correction to Q decays like Q^{3/2}; outside the branch cell it is zero,
    // while Q itself is evaluated exactly.
    const Eigen::VectorXd z = s * target.x.nodes();
    interp = trig_interpolation_matrix(grid_.x, z);
    const SolitonProfile q0(c0_);
    q_scaled.resize(nt);
    for (int j = 0; j < nt; ++j) {
      q_scaled[j] = q0.q(z[j]);
      if (std::abs(z[j]) >= grid_.x.half_width) interp.row(j).setZero();
    }
  }

  using cplx = std::complex<double>;
  const cplx z(a1, -a2);
  const double r2 = a1 * a1 + a2 * a2;
  const int nk = terms_ + 1;

  // Complex x profiles W_n(x) for Theta and its a derivatives.
  std::vector<Eigen::VectorXcd> w(n_modes_), w1(n_modes_), w2(n_modes_);
  for (int n = 0; n < n_modes_; ++n) {
    w[n] = Eigen::VectorXcd::Zero(nt);
    w1[n] = Eigen::VectorXcd::Zero(nt);
    w2[n] = Eigen::VectorXcd::Zero(nt);
    const cplx zn = std::pow(z, n);
    const cplx zn1 = n > 0 ? std::pow(z, n - 1) : cplx(0.0);
    for (int k = 0; k < nk; ++k) {
      if (coeff_[n][k].isZero(0.0)) continue;
      const Eigen::VectorXd prof = same                ? coeff_[n][k]
                                   : n == 0 && k == 0 ? q_scaled
                                                      : Eigen::VectorXd(interp * coeff_[n][k]);
      const double rk = std::pow(r2, k);
      w[n] += (rk * zn) * prof.cast<cplx>();
      if (derivatives) {
        const double rk1 = k > 0 ? 2.0 * k * std::pow(r2, k - 1) : 0.0;
        const cplx da1 = rk1 * a1 * zn + rk * double(n) * zn1;
        const cplx da2 = rk1 * a2 * zn - cplx(0.0, 1.0) * rk * double(n) * zn1;
        w1[n] += da1 * prof.cast<cplx>();
        w2[n] += da2 * prof.cast<cplx>();
      }
    }
  }

  ThetaSet out;
  const double amp = c / c0_;
  auto assemble = [&](const std::vector<Eigen::VectorXcd>& prof) {
    Field f = Field::Zero(nt, target.n_y);
    for (int l = 0; l < target.n_y; ++l) {
      const double y = target.y_node(l) / grid_.L;
      for (int n = 0; n < n_modes_; ++n) {
        const cplx e = std::polar(1.0, n * y);
        f.col(l) += (prof[n] * e).real();
      }
    }
    return Field(amp * f);
  };
  out.theta = assemble(w);
  if (derivatives) {
    out.d_a1 = assemble(w1);
    out.d_a2 = assemble(w2);
  }
  return out;
}

Field BranchInterp::phi(double a1, double a2) const {
  return theta(a1, a2, c0_, grid_, false).theta;
}

double BranchInterp::mass(double a1, double a2) const {
  const Field f = phi(a1, a2);
  return inner(f, f, grid_);
}

double gamma_from_mass(double c, double c0, double L, double phi_mass) {
  require(phi_mass > 0.0, ErrorKind::InvalidArgument, "mass must be positive");
  const double qc = 2.0 * pi * L * SolitonProfile(c).moment_integral(2.0);
  return c0 * std::pow(qc / phi_mass, 2.0 / 3.0);
}

double gamma_speed(double c, double a1, double a2, const BranchInterp& interp) {
  const double c0 = interp.c0();
  require(std::abs(c - c0) < 0.5 * c0, ErrorKind::Precondition,
          "gamma_speed needs |c - c0| < c0/2");
  require(std::hypot(a1, a2) <= interp.max_amplitude() * (1.0 + 1e-12),
          ErrorKind::Precondition, "amplitude outside the fitted branch range");
  return gamma_from_mass(c, c0, interp.grid().L, interp.mass(a1, a2));
}

double action(const Field& u, double c, const Fft2D& fft) {
  const Grid2D& g = fft.grid();
  const Field ux = fft.dx(u);
  const Field uy = fft.dy(u);
  const double grad = inner(ux, ux, g) + inner(uy, uy, g);
  const double cubic = u.array().cube().sum() * g.cell_area();
  const double mass = inner(u, u, g);
  return 0.5 * grad - cubic / 3.0 + c * mass;
}

double quartic_gap_prediction(double c0, const C2Estimate& c2) {
  return 5.0 * c0 * c2.from_curvature * c2.norm_k_sq / (48.0 * c2.norm_q_sq);
}

double quartic_gap_fit(std::span<const double> amplitudes, std::span<const double> gaps) {
  require(amplitudes.size() == gaps.size() && amplitudes.size() >= 2,
          ErrorKind::InvalidArgument, "quartic fit needs at least two matching samples");
  const Eigen::Index n = static_cast<Eigen::Index>(gaps.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r4 = std::pow(amplitudes[i], 4);
    // Rows scaled by r^-4 so every amplitude carries equal weight.
    a(i, 0) = 1.0;
    a(i, 1) = amplitudes[i] * amplitudes[i];
    b[i] = gaps[i] / r4;
  }
  return a.colPivHouseholderQr().solve(b)[0];
}

Field resample_scaled(const Field& f, const Grid1D& from, double s, const Grid1D& to) {
  const Eigen::MatrixXd t = trig_interpolation_matrix(from, s * to.nodes());
  return t * f;
}

double action_gap(double c, const BranchPoint& point, const Grid2D& grid) {
  const double c0 = point.c0;
  require(std::abs(c - c0) < 0.5 * c0, ErrorKind::Precondition,
          "action_gap needs |c - c0| < c0/2");
  const double mass = inner(point.field, point.field, grid);
  const double gamma = gamma_from_mass(c, c0, grid.L, mass);
  const Field theta =
      (gamma / c0) * resample_scaled(point.field, grid.x, std::sqrt(gamma / c0), grid.x);
  const Fft2D fft(grid);
  return action(theta, c, fft) - action(line_soliton(c, grid), c, fft);
}

double action_gap(double c, double a1, double a2, const BranchInterp& interp) {
  const double gamma = gamma_speed(c, a1, a2, interp);
  const Grid2D& grid = interp.grid();
  const Fft2D fft(grid);
  const Field theta = interp.theta(a1, a2, gamma, grid, false).theta;
  return action(theta, c, fft) - action(line_soliton(c, grid), c, fft);
}

}  // namespace zkls
