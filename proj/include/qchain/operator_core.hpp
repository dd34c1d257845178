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

// Dense complex linear algebra for qubit registers: Kronecker products,
// single-site embedding, partial trace / transpose and Hermitian spectra.
//
// Ordering convention: site 1 is the leftmost tensor factor, so for an
// n-qubit register site s lives at bit (n - s) of the basis index.

#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qchain/types.hpp"

namespace qchain {

namespace pauli {

// |down> = index 0, |up> = index 1.
inline Operator identity() { return Operator::Identity(2, 2); }

inline Operator z() {
  Operator m = Operator::Zero(2, 2);
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return m;
}

// sigma^+ = |up><down|
inline Operator plus() {
  Operator m = Operator::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

inline Operator minus() {
  Operator m = Operator::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

inline Operator x() { return plus() + minus(); }

inline Operator y() { return kI * (minus() - plus()); }

// |up><up| = (sigma_z + 1) / 2
inline Operator number() {
  Operator m = Operator::Zero(2, 2);
  m(1, 1) = 1.0;
  return m;
}

}  // namespace pauli

inline BasisIndex site_bit(int site, int n) {
  return BasisIndex{1} << static_cast<unsigned>(n - site);
}

inline int qubit_count(Index dim) {
  int n = 0;
  Index d = 1;
  while (d < dim) {
    d <<= 1;
    ++n;
  }
  if (d != dim) throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
  return n;
}

inline Operator tensor(const Operator& a, const Operator& b) {
  const Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  Operator out(ra * rb, ca * cb);
  for (Index i = 0; i < ra; ++i) {
    for (Index j = 0; j < ca; ++j) {
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    }
  }
  return out;
}

inline Operator tensor(std::initializer_list<Operator> factors) {
  if (factors.size() == 0) throw std::invalid_argument("tensor: empty factor list");
  auto it = factors.begin();
  Operator out = *it;
  for (++it; it != factors.end(); ++it) out = tensor(out, *it);
  return out;
}

// I (x) ... (x) op (x) ... (x) I with op in tensor slot `site` (1-based).
inline Operator embed(const Operator& op, int site, int n) {
  if (op.rows() != 2 || op.cols() != 2) throw std::invalid_argument("embed: op must be 2x2");
  if (n < 1 || n > kMaxDenseQubits) throw std::invalid_argument("embed: qubit count out of range");
  if (site < 1 || site > n) {
    throw std::out_of_range("embed: site " + std::to_string(site) + " outside 1.." + std::to_string(n));
  }
  const Index dim = Index{1} << n;
  const BasisIndex bit = site_bit(site, n);
  Operator out = Operator::Zero(dim, dim);
  for (BasisIndex x = 0; x < static_cast<BasisIndex>(dim); ++x) {
    if (x & bit) continue;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const Complex v = op(a, b);
        if (v == Complex{}) continue;
        const auto row = static_cast<Index>(a ? (x | bit) : x);
        const auto col = static_cast<Index>(b ? (x | bit) : x);
        out(row, col) = v;
      }
    }
  }
  return out;
}

inline Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

inline Operator anticommutator(const Operator& a, const Operator& b) { return a * b + b * a; }

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double hermiticity_error(const Matrix& m) { return max_abs(m - m.adjoint()); }

inline bool is_hermitian(const Matrix& m, double tol) { return hermiticity_error(m) < tol; }

// Reduced state on the sites in `keep` (1-based). Result factors follow the
// order in which sites are listed.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep, int n) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  if (n < 1 || n > 20 || rho.dim() != (Index{1} << n)) {
    throw std::invalid_argument("partial_trace: density matrix dimension does not match 2^n");
  }
  BasisIndex keep_mask = 0;
  std::vector<BasisIndex> bits;
  bits.reserve(keep.size());
  for (int s : keep) {
    if (s < 1 || s > n) throw std::out_of_range("partial_trace: site out of range");
    const BasisIndex b = site_bit(s, n);
    if (keep_mask & b) throw std::invalid_argument("partial_trace: duplicate site");
    keep_mask |= b;
    bits.push_back(b);
  }
  const auto k = static_cast<int>(bits.size());
  auto reduced_index = [&](BasisIndex x) {
    Index r = 0;
    for (int q = 0; q < k; ++q) r = (r << 1) | ((x & bits[q]) ? 1 : 0);
    return r;
  };

  const Index dim = rho.dim();
  const Matrix& m = rho.matrix();
  Matrix out = Matrix::Zero(Index{1} << k, Index{1} << k);
  for (BasisIndex x = 0; x < static_cast<BasisIndex>(dim); ++x) {
    const Index rx = reduced_index(x);
    const BasisIndex env = x & ~keep_mask;
    // Enumerate y sharing the traced-out bits with x.
    BasisIndex sub = keep_mask;
    while (true) {
      const BasisIndex y = env | sub;
      out(rx, reduced_index(y)) += m(static_cast<Index>(x), static_cast<Index>(y));
      if (sub == 0) break;
      sub = (sub - 1) & keep_mask;
    }
  }
  return DensityMatrix(std::move(out));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep, int n) {
  const std::vector<int> v(keep);
  return partial_trace(rho, std::span<const int>(v), n);
}

// Transpose on the second qubit of a two-qubit operator.
inline Operator partial_transpose(const Matrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw std::invalid_argument("partial_transpose: expected a 4x4 matrix");
  Operator out(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) out(2 * a + b, 2 * c + d) = rho(2 * a + d, 2 * c + b);
  return out;
}

inline Operator partial_transpose(const DensityMatrix& rho) { return partial_transpose(rho.matrix()); }

struct HermitianSpectrum {
  RealVector values;  // ascending
  Matrix vectors;     // columns
};

inline constexpr double kEigHermitianTol = 1e-8;

// Input is symmetrized as (A + A^dag)/2 before decomposition.
inline HermitianSpectrum eig_hermitian(const Operator& a, double tol = kEigHermitianTol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eig_hermitian: matrix is not square");
  const double err = hermiticity_error(a);
  if (!(err < tol)) {
    throw std::invalid_argument("eig_hermitian: matrix is not Hermitian (max|A - A^dag| = " + std::to_string(err) +
                                ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (a + a.adjoint()));
  if (solver.info() != Eigen::Success) throw Error("eig_hermitian: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline RealVector eigvals_hermitian(const Operator& a, double tol = kEigHermitianTol) {
  if (!(hermiticity_error(a) < tol)) throw std::invalid_argument("eigvals_hermitian: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

// Trace norm ||A||_1 of a Hermitian matrix.
inline double trace_norm(const Matrix& a) {
  return eigvals_hermitian(0.5 * (a + a.adjoint()), 1.0).cwiseAbs().sum();
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace_distance: dimension mismatch");
  return 0.5 * trace_norm(a.matrix() - b.matrix());
}

struct DensityDiagnostics {
  double trace_error = 0.0;        // |tr rho - 1|
  double hermiticity_error = 0.0;  // max |rho - rho^dag|
  double min_eigenvalue = 0.0;     // of the Hermitian part

  [[nodiscard]] bool valid(double trace_tol = 1e-10, double herm_tol = 1e-10, double eig_floor = -1e-9) const {
    return trace_error <= trace_tol && hermiticity_error <= herm_tol && min_eigenvalue >= eig_floor;
  }
};

inline DensityDiagnostics diagnose(const DensityMatrix& rho) {
  const Matrix& m = rho.matrix();
  DensityDiagnostics d;
  d.trace_error = std::abs(m.trace() - Complex{1.0});
  d.hermiticity_error = hermiticity_error(m);
  d.min_eigenvalue = eigvals_hermitian(0.5 * (m + m.adjoint()), 1.0).minCoeff();
  return d;
}

}  // namespace qchain
