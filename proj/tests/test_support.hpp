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

#include <cstdint>
#include <random>
#include <string>

#include "qchain/types.hpp"

namespace qchain::test {

// "ud" -> |up down>, leftmost character is site 1.
inline StateVector ket(const std::string& spins) {
  const auto n = static_cast<int>(spins.size());
  Index idx = 0;
  for (int s = 0; s < n; ++s) {
    if (spins[static_cast<std::size_t>(s)] == 'u') idx |= Index{1} << (n - 1 - s);
  }
  StateVector v = StateVector::Zero(Index{1} << n);
  v(idx) = 1.0;
  return v;
}

inline StateVector bell_plus() {
  StateVector v = ket("ud") + ket("du");
  return v / v.norm();
}

inline Matrix random_matrix(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(d, d);
  for (Index c = 0; c < d; ++c)
    for (Index r = 0; r < d; ++r) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

// Random full-rank density matrix G G^dag / tr.
inline DensityMatrix random_density(Index d, std::mt19937_64& rng) {
  const Matrix g = random_matrix(d, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityMatrix(rho);
}

// Haar-ish unitary via QR of a Gaussian matrix.
inline Matrix random_unitary(Index d, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(d, rng));
  return qr.householderQ() * Matrix::Identity(d, d);
}

}  // namespace qchain::test
