// Copyright 2026 The qchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qchain {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Computational basis index over n qubits. Site 1 is the most significant
// bit; a set bit means the qubit is excited (|up>).
using BasisIndex = std::uint64_t;

// Dense complex operator (Hamiltonian, jump operator, observable). The
// dimension is rows() == cols().
using Operator = Matrix;

// Pure state amplitudes in the computational basis.
using StateVector = Vector;

inline constexpr Complex kI{0.0, 1.0};

// Largest qubit count for which full-space dense operators are built.
inline constexpr int kMaxDenseQubits = 12;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Density matrix: Hermitian, unit trace, positive semidefinite. Construction
// does not validate; use diagnose() (operator_core.hpp) to measure how far a
// numerically produced state is from the ideal set.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
      throw std::invalid_argument("DensityMatrix: matrix must be square and non-empty");
    }
  }

  static DensityMatrix pure(const StateVector& psi) {
    return DensityMatrix(psi * psi.adjoint());
  }

  static DensityMatrix basis_state(Index dim, Index index) {
    Matrix m = Matrix::Zero(dim, dim);
    m(index, index) = 1.0;
    return DensityMatrix(std::move(m));
  }

  static DensityMatrix maximally_mixed(Index dim) {
    return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
  [[nodiscard]] Index dim() const noexcept { return m_.rows(); }
  [[nodiscard]] Complex trace() const { return m_.trace(); }

  // Hermitian part, renormalized to unit trace.
  [[nodiscard]] DensityMatrix cleaned() const {
    Matrix h = 0.5 * (m_ + m_.adjoint());
    const double tr = h.trace().real();
    if (tr != 0.0) h /= tr;
    return DensityMatrix(std::move(h));
  }

 private:
  Matrix m_;
};

}  // namespace qchain
