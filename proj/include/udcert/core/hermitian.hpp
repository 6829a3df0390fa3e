// Copyright 2026 The udcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "udcert/core/errors.hpp"

namespace udcert {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kImaginaryResidueTolerance = 1e-12;

/// Returns the real part of a trace-like quantity. An imaginary residue above
/// 1e-12 (relative to `scale` when it exceeds one) means the operands were not
/// Hermitian and is reported as an error.
inline double real_part_checked(Complex value, double scale = 1.0) {
  if (std::abs(value.imag()) > kImaginaryResidueTolerance * std::max(1.0, scale)) {
    throw ContractError("imaginary residue " + std::to_string(value.imag()) +
                        " in a trace of Hermitian operands");
  }
  return value.real();
}

/// Dense d x d Hermitian matrix. Construction validates conjugate symmetry
/// and stores the exactly symmetrized matrix.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  explicit HermitianMatrix(CMatrix m) {
    detail::require(m.rows() == m.cols() && m.rows() > 0,
                    "Hermitian matrix must be square and non-empty");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (!(asym <= kHermitianTolerance * scale)) {
      throw ContractError("matrix is not Hermitian (max |A - A^dagger| = " +
                          std::to_string(asym) + ")");
    }
    matrix_ = (m + m.adjoint()) * 0.5;
  }

  static HermitianMatrix identity(int dim) {
    return HermitianMatrix(CMatrix::Identity(dim, dim));
  }

  /// Rank-1 projector |v><v| / <v|v>.
  static HermitianMatrix projector(const CVector& v) {
    const double n2 = v.squaredNorm();
    detail::require(n2 > 0.0, "projector onto the zero vector");
    return HermitianMatrix(v * v.adjoint() / n2);
  }

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const CMatrix& matrix() const { return matrix_; }
  Complex operator()(int i, int j) const { return matrix_(i, j); }

  double frobenius_norm() const { return matrix_.norm(); }
  double trace() const { return matrix_.trace().real(); }

  RVector eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(matrix_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

  bool is_identity(double tol = kHermitianTolerance) const {
    return (matrix_ - CMatrix::Identity(dim(), dim())).cwiseAbs().maxCoeff() <= tol;
  }

 private:
  CMatrix matrix_;
};

/// Frobenius inner product Tr[A B] of two Hermitian matrices.
inline double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  detail::require(a.dim() == b.dim(), "trace_product: dimension mismatch");
  const Complex t = (a.matrix().cwiseProduct(b.matrix().transpose())).sum();
  return real_part_checked(t, a.frobenius_norm() * b.frobenius_norm());
}

// Isometric real coordinates for Hermitian matrices: the d diagonal entries
// followed by sqrt(2)*Re and sqrt(2)*Im of each upper-triangular entry in
// row-major order, so that <hvec(A), hvec(B)> = Tr[A B].

inline RVector hvec(const CMatrix& m) {
  const int d = static_cast<int>(m.rows());
  RVector v(d * d);
  for (int i = 0; i < d; ++i) v(i) = m(i, i).real();
  int k = d;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      v(k++) = M_SQRT2 * m(i, j).real();
      v(k++) = M_SQRT2 * m(i, j).imag();
    }
  }
  return v;
}

inline RVector hvec(const HermitianMatrix& m) { return hvec(m.matrix()); }

inline CMatrix unhvec_matrix(const RVector& v, int d) {
  detail::require(v.size() == static_cast<Eigen::Index>(d) * d,
                  "unhvec: coordinate vector has wrong length");
  CMatrix m(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = v(i);
  int k = d;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const Complex z(v(k) * M_SQRT1_2, v(k + 1) * M_SQRT1_2);
      m(i, j) = z;
      m(j, i) = std::conj(z);
      k += 2;
    }
  }
  return m;
}

inline HermitianMatrix unhvec(const RVector& v, int d) {
  return HermitianMatrix(unhvec_matrix(v, d));
}

/// Unit vector in C^d.
class PureState {
 public:
  PureState() = default;

  /// Normalizes `amplitudes`; a zero vector is rejected.
  static PureState normalized(CVector amplitudes) {
    const double n = amplitudes.norm();
    detail::require(amplitudes.size() > 0 && n > 0.0 && std::isfinite(n),
                    "pure state from a zero or non-finite vector");
    return PureState(amplitudes / n);
  }

  /// Wraps a vector that must already have unit norm (within 1e-12).
  explicit PureState(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    detail::require(amplitudes_.size() > 0, "pure state must be non-empty");
    detail::require(std::abs(amplitudes_.norm() - 1.0) <= 1e-12,
                    "pure state amplitudes must have unit norm");
  }

  static PureState basis(int dim, int index) {
    detail::require(index >= 0 && index < dim, "basis index out of range");
    CVector v = CVector::Zero(dim);
    v(index) = 1.0;
    return PureState(v);
  }

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const CVector& amplitudes() const { return amplitudes_; }

  HermitianMatrix projector() const {
    return HermitianMatrix(amplitudes_ * amplitudes_.adjoint());
  }

 private:
  CVector amplitudes_;
};

inline constexpr double kDensityTolerance = 1e-10;

/// Positive semidefinite, unit-trace Hermitian matrix.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  explicit DensityMatrix(HermitianMatrix m, double tol = kDensityTolerance)
      : matrix_(std::move(m)) {
    detail::require(std::abs(matrix_.trace() - 1.0) <= tol,
                    "density matrix trace must be 1 (got " +
                        std::to_string(matrix_.trace()) + ")");
    detail::require(matrix_.eigenvalues().minCoeff() >= -tol,
                    "density matrix must be positive semidefinite");
  }

  static DensityMatrix pure(const PureState& psi) {
    return DensityMatrix(psi.projector());
  }

  static DensityMatrix maximally_mixed(int dim) {
    return DensityMatrix(HermitianMatrix(CMatrix::Identity(dim, dim) / double(dim)));
  }

  int dim() const { return matrix_.dim(); }
  const HermitianMatrix& hermitian() const { return matrix_; }
  const CMatrix& matrix() const { return matrix_.matrix(); }

 private:
  HermitianMatrix matrix_;
};

/// <psi|Y|psi>.
inline double fidelity(const PureState& psi, const DensityMatrix& y) {
  detail::require(psi.dim() == y.dim(), "fidelity: dimension mismatch");
  const Complex f = psi.amplitudes().dot(y.matrix() * psi.amplitudes());
  return real_part_checked(f);
}

}  // namespace udcert
