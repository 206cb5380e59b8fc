// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "core/fft.hpp"
#include "core/grid.hpp"

namespace zkls {

enum class OperatorKind { LcPlusA, DxLcPlusA };

struct DiscreteOperator {
  OperatorKind kind = OperatorKind::LcPlusA;
  double c = 1.0;
  double a = 0.0;
  // Exponential weight alpha: the matrix acts on e^{alpha x} u.
  double weight = 0.0;
  Grid1D grid;
  Eigen::MatrixXd matrix;
};

// -d^2/dx^2 + (c + a) - 2 Q_c by Fourier collocation. Symmetric.
DiscreteOperator build_lc(double c, double a, const Grid1D& grid);

// D_x (L_c + a). With weight alpha > 0 the operator is conjugated by
// e^{alpha x}; the eigenvalues are unchanged but eigenfunctions with a slowly
// decaying left tail fit inside the cell.
DiscreteOperator build_dx_lc(double c, double a, const Grid1D& grid,
                             double weight = 0.0);

// The weight used when the dense spectrum is compared with the Evans root.
double evans_matching_weight(double c, double a);

struct EigenPair {
  std::complex<double> value;
  Eigen::VectorXcd vector;
};

// Symmetric kind: the `count` algebraically smallest eigenpairs, ascending.
// Non-symmetric kind: the `count` eigenpairs of largest real part, by
// decreasing real part and then decreasing imaginary part. Eigenvectors have
// unit discrete L2 norm (h * sum |v|^2 = 1) and a real positive entry of
// largest modulus.
std::vector<EigenPair> eigen_extremal(const DiscreteOperator& op, int count,
                                      bool with_vectors = true);

// Real parts within this distance of the imaginary axis are truncation
// artefacts of the essential spectrum.
inline constexpr double kSpuriousRealPart = 1e-4;

// Largest real part among eigenvalues of D_x(L_c + a) that survive the
// spurious-mode filter, or nothing if all lie within the filter band.
struct UnstableSpectrum {
  std::optional<std::complex<double>> leading;
  int count = 0;
};
UnstableSpectrum unstable_spectrum(const DiscreteOperator& op);

enum class Stability { Stable, Critical, Unstable };
const char* stability_name(Stability s) noexcept;

struct StabilityVerdict {
  double l_critical = 0.0;
  Stability classification = Stability::Stable;
  std::optional<int> witness_mode;
};

StabilityVerdict classify_threshold(double c, double L);

// Lowest eigenvalues of the 2D linearization on the y-mode blocks
// L_c + n^2/L^2, n = 0..n_max. Blocks n >= 1 appear twice (cos and sin).
struct ModeEigenvalue {
  int n = 0;
  bool sine = false;
  double value = 0.0;
  Eigen::VectorXd vector;
};
std::vector<ModeEigenvalue> mode_family_spectrum(double c, double L,
                                                 const Grid1D& grid, int n_max,
                                                 int per_mode);

// (-Delta + c - 2 Q_c) u on a 2D grid by FFT.
Field apply_linearized(const Field& u, double c, const Fft2D& fft);

}  // namespace zkls
