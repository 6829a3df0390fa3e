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

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "udcert/core/hermitian.hpp"

namespace udcert {

/// Euclidean projection of `v` onto the probability simplex {p >= 0, sum p = 1}.
inline RVector project_simplex(const RVector& v) {
  detail::require(v.size() >= 1 && v.allFinite(), "project_simplex: empty or non-finite input");
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, shift = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) shift = candidate;
  }
  return (v.array() - shift).cwiseMax(0.0).matrix();
}

namespace detail {

inline CMatrix project_spectrahedron_matrix(const CMatrix& h) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) * 0.5);
  const RVector p = project_simplex(es.eigenvalues());
  const CMatrix& v = es.eigenvectors();
  CMatrix y = v * p.asDiagonal() * v.adjoint();
  return (y + y.adjoint()) * 0.5;
}

}  // namespace detail

/// Frobenius-nearest density matrix: eigenvalues of `h` projected onto the simplex.
inline DensityMatrix project_spectrahedron(const HermitianMatrix& h) {
  return DensityMatrix(HermitianMatrix(detail::project_spectrahedron_matrix(h.matrix())));
}

}  // namespace udcert
