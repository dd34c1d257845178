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

// Independent reference computations for tests and the acceptance suite.
// Nothing here calls into operator_core, model, dynamics or observables:
// states are built from explicit amplitude lists, reductions are done by
// enumerating environment configurations of a pure state, and spectra come
// from a general (non-Hermitian) eigensolver.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace qchain::oracle {

using cd = std::complex<double>;

// Sparse pure state: occupation pattern (bit s-1 = site s excited) -> amplitude.
using Amplitudes = std::map<std::uint64_t, cd>;

inline std::uint64_t excite(int site) { return std::uint64_t{1} << (site - 1); }

// Geometry-A W state written out term by term for n in {4, 6, 8} exactly as
// the closed forms list them.
inline Amplitudes w_state_printed(int n) {
  Amplitudes a;
  if (n == 4) {
    const double s = 1.0 / std::sqrt(3.0);
    a[excite(1)] = s;
    a[excite(2)] = s;
    a[excite(4)] = -s;
  } else if (n == 6) {
    const double s = 1.0 / std::sqrt(4.0);
    a[excite(1)] = s;
    a[excite(2)] = s;
    a[excite(4)] = -s;
    a[excite(6)] = s;
  } else if (n == 8) {
    const double s = 1.0 / std::sqrt(5.0);
    a[excite(1)] = s;
    a[excite(2)] = s;
    a[excite(4)] = -s;
    a[excite(6)] = s;
    a[excite(8)] = -s;
  }
  return a;
}

// rho_red[(a_i a_j), (b_i b_j)] = sum over environment e of psi(a, e) psi*(b, e),
// basis order |down down>, |down up>, |up down>, |up up>.
inline Eigen::Matrix4cd reduce_pure_to_pair(const Amplitudes& psi, int i, int j) {
  Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
  const std::uint64_t mi = excite(i), mj = excite(j);
  for (const auto& [x, ax] : psi) {
    for (const auto& [y, ay] : psi) {
      if ((x & ~(mi | mj)) != (y & ~(mi | mj))) continue;
      const int a = ((x & mi) ? 2 : 0) + ((x & mj) ? 1 : 0);
      const int b = ((y & mi) ? 2 : 0) + ((y & mj) ? 1 : 0);
      r(a, b) += ax * std::conj(ay);
    }
  }
  return r;
}

// Transpose of the second factor by explicit index relabelling.
inline Eigen::Matrix4cd transpose_second(const Eigen::Matrix4cd& r) {
  Eigen::Matrix4cd t;
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2) t(2 * a1 + a2, 2 * b1 + b2) = r(2 * a1 + b2, 2 * b1 + a2);
  return t;
}

inline double negativity_bruteforce(const Eigen::Matrix4cd& r) {
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(transpose_second(r), false);
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) sum += std::abs(es.eigenvalues()(k).real());
  return std::max(0.0, sum - 1.0);
}

// Pair (1, even j) of a W state with m equal-weight components: the reduced
// state is (2/m)|psi-><psi-| + ((m-2)/m)|dd><dd| up to a relative sign, whose
// partial transpose has one negative eigenvalue ((m-2) - sqrt((m-2)^2+4))/(2m).
inline double w_pair_negativity_closed_form(int m) {
  const double a = m - 2.0;
  return (std::sqrt(a * a + 4.0) - a) / m;
}

// Dense Hamiltonian action on a single-excitation amplitude vector of a 1D
// XX chain: (H psi)_s = E0 psi_s + sum_bonds c (psi_{s+-1}).
inline Eigen::VectorXd single_excitation_chain_action(const std::vector<double>& bond, double onsite,
                                                      const Eigen::VectorXd& psi) {
  const auto n = psi.size();
  Eigen::VectorXd out = onsite * psi;
  for (Eigen::Index s = 0; s + 1 < n; ++s) {
    out(s) += bond[static_cast<std::size_t>(s)] * psi(s + 1);
    out(s + 1) += bond[static_cast<std::size_t>(s)] * psi(s);
  }
  return out;
}

}  // namespace qchain::oracle
