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

#include <string>
#include <string_view>
#include <vector>

#include "udcert/core/hermitian.hpp"

namespace udcert {

/// Tensor product of single-qubit Paulis, written as a label over {I,X,Y,Z}.
class PauliString {
 public:
  explicit PauliString(std::string label) : label_(std::move(label)) {
    if (label_.empty()) throw FormatError("Pauli label must be non-empty");
    for (char c : label_) {
      if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
        throw FormatError("invalid Pauli character '" + std::string(1, c) +
                          "' in label \"" + label_ + "\"");
      }
    }
  }

  const std::string& label() const { return label_; }
  int num_qubits() const { return static_cast<int>(label_.size()); }
  int dim() const { return 1 << num_qubits(); }
  bool is_identity() const { return label_.find_first_not_of('I') == std::string::npos; }

  friend bool operator==(const PauliString& a, const PauliString& b) = default;
  friend auto operator<=>(const PauliString& a, const PauliString& b) = default;

 private:
  std::string label_;
};

namespace detail {

inline Eigen::Matrix2cd single_qubit_pauli(char c) {
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd m;
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    default:  m << 1, 0, 0, -1; break;
  }
  return m;
}

}  // namespace detail

/// Kronecker product of the single-qubit Paulis in label order (leftmost
/// character is the most significant qubit). Entries are unnormalized.
inline HermitianMatrix pauli_to_matrix(const PauliString& p) {
  CMatrix m = CMatrix::Ones(1, 1);
  for (char c : p.label()) {
    const Eigen::Matrix2cd s = detail::single_qubit_pauli(c);
    CMatrix next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index col = 0; col < m.cols(); ++col)
        next.block<2, 2>(2 * r, 2 * col) = m(r, col) * s;
    m = std::move(next);
  }
  return HermitianMatrix(std::move(m));
}

/// All 4^n labels in lexicographic I < X < Y < Z order; the identity is first.
inline std::vector<PauliString> all_pauli_strings(int num_qubits) {
  detail::require(num_qubits >= 1 && num_qubits <= 8, "num_qubits must be in [1, 8]");
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  const long total = 1L << (2 * num_qubits);
  std::vector<PauliString> out;
  out.reserve(total);
  for (long code = 0; code < total; ++code) {
    std::string label(num_qubits, 'I');
    long c = code;
    for (int q = num_qubits - 1; q >= 0; --q) {
      label[q] = kLetters[c & 3];
      c >>= 2;
    }
    out.emplace_back(std::move(label));
  }
  return out;
}

}  // namespace udcert
