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
#include <string>
#include <vector>

#include "udcert/core/scheme.hpp"
#include "udcert/polybases/chebyshev.hpp"

namespace udcert {

struct PBOptions {
  /// Phase parameter; NaN selects pi / d.
  double alpha = std::nan("");
  /// Drop repeated copies of P_{d-1} from the flattened scheme.
  bool dedup = false;
};

/// Projective measurement made of k polynomial bases.
struct PBScheme {
  int dim = 0;
  double alpha = 0.0;
  /// bases[b][k] is the k-th unit vector of basis B_{b+1}.
  std::vector<std::vector<CVector>> bases;
  MeasurementScheme scheme;
};

/// True when e^{i j alpha} is not real for j = 1..d-1.
inline bool valid_pb_alpha(int dim, double alpha, double tol = 1e-12) {
  for (int j = 1; j < dim; ++j)
    if (std::abs(std::sin(j * alpha)) <= tol) return false;
  return true;
}

namespace detail {

// Unit vectors sum_{j<n} e^{i j alpha} p_j(x_{n,k}) |j> in C^dim, k = 1..n.
inline std::vector<CVector> polynomial_vectors(int dim, int n, double alpha) {
  std::vector<CVector> out;
  for (double root : chebyshev_roots(n)) {
    CVector v = CVector::Zero(dim);
    for (int j = 0; j < n; ++j)
      v(j) = std::polar(chebyshev_orthonormal(j, root), j * alpha);
    out.push_back(v / v.norm());
  }
  return out;
}

}  // namespace detail

/// Builds B1..Bk (k in {3, 4, 5}); k = 3 is {B1, B2, B3}. The flattened
/// scheme is the identity followed by every projector of the chosen bases.
inline PBScheme build_pb(int dim, int basis_count, const PBOptions& options = {}) {
  detail::require(dim >= 2, "build_pb: dimension must be >= 2");
  detail::require(basis_count >= 3 && basis_count <= 5, "build_pb: basis count must be 3, 4 or 5");
  const double alpha = std::isnan(options.alpha) ? M_PI / dim : options.alpha;
  detail::require(valid_pb_alpha(dim, alpha),
                  "build_pb: alpha must satisfy e^{i j alpha} not real for j = 1..d-1");

  const CVector last = CVector::Unit(dim, dim - 1);
  auto with_last = [&](std::vector<CVector> v) {
    v.push_back(last);
    return v;
  };

  PBScheme pb;
  pb.dim = dim;
  pb.alpha = alpha;
  pb.bases.push_back(detail::polynomial_vectors(dim, dim, 0.0));
  pb.bases.push_back(with_last(detail::polynomial_vectors(dim, dim - 1, 0.0)));
  pb.bases.push_back(detail::polynomial_vectors(dim, dim, alpha));
  if (basis_count >= 4) pb.bases.push_back(with_last(detail::polynomial_vectors(dim, dim - 1, alpha)));
  if (basis_count >= 5) {
    std::vector<CVector> computational;
    for (int i = 0; i < dim; ++i) computational.push_back(CVector::Unit(dim, i));
    pb.bases.push_back(std::move(computational));
  }

  std::vector<HermitianMatrix> obs{HermitianMatrix::identity(dim)};
  std::vector<std::string> labels{"I"};
  bool have_last = false;
  for (std::size_t b = 0; b < pb.bases.size(); ++b) {
    for (std::size_t k = 0; k < pb.bases[b].size(); ++k) {
      const CVector& v = pb.bases[b][k];
      const bool is_last = (v - last).norm() == 0.0;
      if (options.dedup && is_last && have_last) continue;
      have_last = have_last || is_last;
      obs.push_back(HermitianMatrix::projector(v));
      labels.push_back("B" + std::to_string(b + 1) + "[" + std::to_string(k) + "]");
    }
  }
  pb.scheme = MeasurementScheme(std::move(obs), std::move(labels));
  return pb;
}

}  // namespace udcert
