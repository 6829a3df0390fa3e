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

#include "udcert/certify/params.hpp"
#include "udcert/core/scheme.hpp"

namespace udcert {

/// Measurement vector a(theta) = M_A(Delta(theta)) with its exact Jacobian.
///
/// The unitary is formed spectrally: with H = -i G = V diag(w) V^dagger,
/// U = V diag(e^{iw}) V^dagger and the Fréchet derivative of exp at G in
/// direction E is V (Phi o (V^dagger E V)) V^dagger, where
/// Phi_jl = e^{i(w_j + w_l)/2} sinc((w_j - w_l)/2). Writing D = V^dagger Delta V and
/// dU U^dagger = V X V^dagger, the derivative of Delta is V (X D + (X D)^dagger) V^dagger
/// with X = Psi o (V^dagger E V) and Psi_jl = e^{i(w_j - w_l)/2} sinc((w_j - w_l)/2).
class MeasurementResidual {
 public:
  MeasurementResidual(const MeasurementScheme& scheme, Mode mode)
      : scheme_(&scheme), dim_(scheme.dim()), mode_(mode) {
    detail::require(dim_ >= 2, "residual: dimension must be >= 2");
  }

  int dim() const { return dim_; }
  Mode mode() const { return mode_; }

  RVector operator()(const RVector& flat, RMatrix* jacobian) const {
    detail::require(flat.allFinite(), "variational parameters must be finite");
    const VariationalParams params = VariationalParams::unflatten(mode_, dim_, flat);
    const int d = dim_;
    const int k = lambda_count(mode_, d);
    const RMatrix& map = scheme_->map_matrix();

    const RVector u = params.theta_lambda.unaryExpr([](double t) { return softplus(t); });
    const double unorm = u.norm();
    if (!(unorm > 0.0)) throw DegenerateParameterError("softplus eigenvalues collapsed to zero");
    const RVector lambda = u / unorm;
    RVector s(k);
    s(0) = -lambda(0);
    s.tail(k - 1) = lambda.tail(k - 1);

    CMatrix h = unitary_generator(params.theta_psi) * Complex(0.0, -1.0);
    h = (h + h.adjoint()) * 0.5;
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    const CMatrix& v = es.eigenvectors();
    const RVector& w = es.eigenvalues();
    CVector phases(d);
    for (int i = 0; i < d; ++i) phases(i) = std::polar(1.0, w(i));
    const CMatrix unitary = v * phases.asDiagonal() * v.adjoint();
    const CMatrix uk = unitary.leftCols(k);
    const CMatrix delta = uk * s.asDiagonal() * uk.adjoint();
    RVector a = map * hvec(delta);
    if (!jacobian) return a;

    const Eigen::Index rows = map.rows();
    jacobian->resize(rows, k + d * d);

    // Eigenvalue block through softplus and the unit-norm rescaling.
    RMatrix per_s(rows, k);
    for (int i = 0; i < k; ++i) {
      const CMatrix proj = uk.col(i) * uk.col(i).adjoint();
      per_s.col(i) = map * hvec(proj) * (i == 0 ? -1.0 : 1.0);
    }
    const RMatrix dlambda_du = (RMatrix::Identity(k, k) - lambda * lambda.transpose()) / unorm;
    for (int j = 0; j < k; ++j)
      jacobian->col(j) = per_s * dlambda_du.col(j) * softplus_derivative(params.theta_lambda(j));

    // Unitary block, evaluated in the eigenbasis of H.
    const auto& obs = scheme_->observables();
    RMatrix rotated_map(rows, d * d);
    for (Eigen::Index i = 0; i < rows; ++i)
      rotated_map.row(i) = hvec(CMatrix(v.adjoint() * obs[static_cast<std::size_t>(i)].matrix() * v)).transpose();
    const CMatrix dmat = v.adjoint() * delta * v;
    CMatrix phi(d, d);
    for (int j = 0; j < d; ++j) {
      for (int l = 0; l < d; ++l) {
        const double half = 0.5 * (w(j) - w(l));
        const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
        phi(j, l) = std::polar(sinc, half);
      }
    }
    const Complex one_plus_i(1.0, 1.0), minus_one_plus_i(-1.0, 1.0), two_i(0.0, 2.0);
    CMatrix x(d, d);
    for (int b = 0; b < d; ++b) {
      const CVector vb = v.row(b).transpose();
      for (int a_idx = 0; a_idx < d; ++a_idx) {
        const CVector va = v.row(a_idx).transpose();
        // V^dagger E V for E = dG / dtheta(a, b).
        if (a_idx == b) {
          x = two_i * (va.conjugate() * va.transpose());
        } else {
          x = one_plus_i * (va.conjugate() * vb.transpose()) +
              minus_one_plus_i * (vb.conjugate() * va.transpose());
        }
        x = phi.cwiseProduct(x);
        const CMatrix xd = x * dmat;
        const CMatrix y = xd + xd.adjoint();
        jacobian->col(k + a_idx + b * d) = rotated_map * hvec(y);
      }
    }
    return a;
  }

 private:
  const MeasurementScheme* scheme_;
  int dim_;
  Mode mode_;
};

}  // namespace udcert
