// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/error.hpp"
#include "core/soliton.hpp"

namespace zkls {

namespace {

Eigen::VectorXd potential(double c, double a, const Grid1D& grid) {
  const SolitonProfile q(c);
  Eigen::VectorXd v(grid.n_points);
  for (int j = 0; j < grid.n_points; ++j) v[j] = c + a - 2.0 * q.q(grid.node(j));
  return v;
}

void check_build_args(double c, double a, const Grid1D& grid) {
  require(std::isfinite(c) && c > 0.0, ErrorKind::InvalidArgument,
          "speed c must be positive");
  require(std::isfinite(a) && a >= 0.0, ErrorKind::InvalidArgument,
          "transverse shift a must be non-negative");
  grid.check_resolves(c);
}

void normalize(Eigen::VectorXcd& v, double h) {
  const double norm = std::sqrt(h * v.squaredNorm());
  if (norm == 0.0) return;
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  const std::complex<double> phase = std::abs(v[k]) / v[k];
  v *= phase / norm;
}

}  // namespace

DiscreteOperator build_lc(double c, double a, const Grid1D& grid) {
  check_build_args(c, a, grid);
  DiscreteOperator op;
  op.kind = OperatorKind::LcPlusA;
  op.c = c;
  op.a = a;
  op.grid = grid;
  op.matrix = -fourier_d2(grid);
  op.matrix.diagonal() += potential(c, a, grid);
  return op;
}

DiscreteOperator build_dx_lc(double c, double a, const Grid1D& grid, double weight) {
  check_build_args(c, a, grid);
  require(std::isfinite(weight) && weight >= 0.0, ErrorKind::InvalidArgument,
          "weight must be non-negative");
  const int n = grid.n_points;
  const Eigen::MatrixXd d1 = fourier_d1(grid);
  const Eigen::MatrixXd d2 = fourier_d2(grid);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);

  Eigen::MatrixXd inner = -(d2 - 2.0 * weight * d1 + weight * weight * id);
  inner.diagonal() += potential(c, a, grid);

  DiscreteOperator op;
  op.kind = OperatorKind::DxLcPlusA;
  op.c = c;
  op.a = a;
  op.weight = weight;
  op.grid = grid;
  op.matrix.noalias() = (d1 - weight * id) * inner;
  return op;
}

double evans_matching_weight(double c, double a) { return 0.5 * std::sqrt(c + a); }

std::vector<EigenPair> eigen_extremal(const DiscreteOperator& op, int count,
                                      bool with_vectors) {
  const int n = static_cast<int>(op.matrix.rows());
  require(count >= 1 && count <= n, ErrorKind::InvalidArgument,
          "eigenpair count out of range");
  const double h = op.grid.spacing();
  std::vector<EigenPair> out;

  if (op.kind == OperatorKind::LcPlusA) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        op.matrix, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    require(es.info() == Eigen::Success, ErrorKind::Numerical,
            "symmetric eigensolver did not converge");
    for (int k = 0; k < count; ++k) {
      EigenPair p;
      p.value = es.eigenvalues()[k];
      if (with_vectors) {
        p.vector = es.eigenvectors().col(k).cast<std::complex<double>>();
        normalize(p.vector, h);
      }
      out.push_back(std::move(p));
    }
    return out;
  }

  Eigen::EigenSolver<Eigen::MatrixXd> es(op.matrix, with_vectors);
  require(es.info() == Eigen::Success, ErrorKind::Numerical,
          "non-symmetric eigensolver did not converge");
  const Eigen::VectorXcd values = es.eigenvalues();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    if (values[i].real() != values[j].real()) return values[i].real() > values[j].real();
    return values[i].imag() > values[j].imag();
  });
  Eigen::MatrixXcd vectors;
  if (with_vectors) vectors = es.eigenvectors();
  for (int k = 0; k < count; ++k) {
    EigenPair p;
    p.value = values[order[k]];
    if (with_vectors) {
      p.vector = vectors.col(order[k]);
      normalize(p.vector, h);
    }
    out.push_back(std::move(p));
  }
  return out;
}

UnstableSpectrum unstable_spectrum(const DiscreteOperator& op) {
  require(op.kind == OperatorKind::DxLcPlusA, ErrorKind::InvalidArgument,
          "unstable spectrum requires the D_x(L_c + a) operator");
  Eigen::EigenSolver<Eigen::MatrixXd> es(op.matrix, false);
  require(es.info() == Eigen::Success, ErrorKind::Numerical,
          "non-symmetric eigensolver did not converge");
  UnstableSpectrum result;
  for (const auto& v : es.eigenvalues()) {
    if (v.real() <= kSpuriousRealPart) continue;
    ++result.count;
    if (!result.leading || v.real() > result.leading->real() ||
        (v.real() == result.leading->real() && v.imag() > result.leading->imag())) {
      result.leading = v;
    }
  }
  return result;
}

const char* stability_name(Stability s) noexcept {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Critical: return "critical";
    case Stability::Unstable: return "unstable";
  }
  return "unknown";
}

StabilityVerdict classify_threshold(double c, double L) {
  require(std::isfinite(c) && c > 0.0, ErrorKind::InvalidArgument,
          "speed c must be positive");
  require(std::isfinite(L) && L > 0.0, ErrorKind::InvalidArgument,
          "torus parameter L must be positive");
  StabilityVerdict v;
  v.l_critical = 2.0 / std::sqrt(5.0 * c);
  const double first = 1.0 / (L * L);
  const double lambda = 1.25 * c;
  if (std::abs(first - lambda) <= 1e-12) {
    v.classification = Stability::Critical;
  } else if (first < lambda) {
    // n^2/L^2 grows with n, so n = 1 is the smallest witness.
    v.classification = Stability::Unstable;
    v.witness_mode = 1;
  } else {
    v.classification = Stability::Stable;
  }
  return v;
}

std::vector<ModeEigenvalue> mode_family_spectrum(double c, double L,
                                                 const Grid1D& grid, int n_max,
                                                 int per_mode) {
  require(n_max >= 0, ErrorKind::InvalidArgument, "n_max must be non-negative");
  require(std::isfinite(L) && L > 0.0, ErrorKind::InvalidArgument,
          "torus parameter L must be positive");
  std::vector<ModeEigenvalue> out;
  for (int n = 0; n <= n_max; ++n) {
    const auto op = build_lc(c, n * n / (L * L), grid);
    const auto pairs = eigen_extremal(op, per_mode);
    for (int copy = 0; copy < (n == 0 ? 1 : 2); ++copy) {
      for (const auto& p : pairs) {
        ModeEigenvalue m;
        m.n = n;
        m.sine = copy == 1;
        m.value = p.value.real();
        m.vector = p.vector.real();
        out.push_back(std::move(m));
      }
    }
  }
  return out;
}

Field apply_linearized(const Field& u, double c, const Fft2D& fft) {
  const SolitonProfile q(c);
  const Grid2D& g = fft.grid();
  Field out = -fft.laplacian(u) + c * u;
  for (int j = 0; j < g.nx(); ++j) out.row(j) -= 2.0 * q.q(g.x.node(j)) * u.row(j);
  return out;
}

}  // namespace zkls
