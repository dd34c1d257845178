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

// Correlators, sigma_z, negativity, fidelity, purity and dark-state checks.
// Each observable has a full-space form (DensityMatrix over 2^n) and a
// sector form (SectorState) that never builds the full space.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qchain/dynamics.hpp"
#include "qchain/local_terms.hpp"
#include "qchain/operator_core.hpp"

namespace qchain {

namespace detail {

inline void check_site(int s, int n) {
  if (s < 1 || s > n) throw std::out_of_range("site " + std::to_string(s) + " outside 1.." + std::to_string(n));
}

inline void check_pair(int i, int j, int n) {
  check_site(i, n);
  check_site(j, n);
  if (i == j) throw std::invalid_argument("correlator: i == j is a single-site observable");
}

// tr(rho O) for O given symbolically; rho supported on the sorted basis.
inline Complex sector_expectation(const SectorState& s, const OperatorSum& op) {
  const Sector& sec = s.sector;
  const Matrix& m = s.rho.matrix();
  Complex acc{};
  for (Index c = 0; c < sec.dim(); ++c) {
    for (const auto& t : op.terms()) {
      auto img = t.act(sec.basis[static_cast<std::size_t>(c)], sec.n);
      if (!img) continue;
      const Index r = sec.position(img->first);
      if (r < 0) continue;
      acc += img->second * m(c, r);  // O_{rc} rho_{cr}
    }
  }
  return acc;
}

}  // namespace detail

// <sigma_i^+ sigma_j^-> = tr(rho sigma_i^+ sigma_j^-)
inline Complex correlator(const DensityMatrix& rho, int i, int j) {
  const int n = qubit_count(rho.dim());
  detail::check_pair(i, j, n);
  const BasisIndex bi = site_bit(i, n), bj = site_bit(j, n);
  // sigma_i^+ sigma_j^- |x> = |x ^ bi ^ bj> when x has j up and i down.
  Complex acc{};
  const Matrix& m = rho.matrix();
  for (BasisIndex x = 0; x < static_cast<BasisIndex>(rho.dim()); ++x) {
    if ((x & bj) && !(x & bi)) acc += m(static_cast<Index>(x), static_cast<Index>(x ^ bi ^ bj));
  }
  return acc;
}

inline Complex correlator(const SectorState& s, int i, int j) {
  detail::check_pair(i, j, s.sector.n);
  OperatorSum op(s.sector.n);
  op.add(1.0, {{i, LocalOp::Plus}, {j, LocalOp::Minus}});
  return detail::sector_expectation(s, op);
}

inline double sigma_z(const DensityMatrix& rho, int j) {
  const int n = qubit_count(rho.dim());
  detail::check_site(j, n);
  const BasisIndex bj = site_bit(j, n);
  double acc = 0.0;
  for (BasisIndex x = 0; x < static_cast<BasisIndex>(rho.dim()); ++x) {
    const double p = rho.matrix()(static_cast<Index>(x), static_cast<Index>(x)).real();
    acc += (x & bj) ? p : -p;
  }
  return acc;
}

inline double sigma_z(const SectorState& s, int j) {
  detail::check_site(j, s.sector.n);
  const BasisIndex bj = site_bit(j, s.sector.n);
  double acc = 0.0;
  for (Index r = 0; r < s.sector.dim(); ++r) {
    const double p = s.rho.matrix()(r, r).real();
    acc += (s.sector.basis[static_cast<std::size_t>(r)] & bj) ? p : -p;
  }
  return acc;
}

// N = max(0, sum_k |lambda_k| - 1), lambda_k the spectrum of rho^{T_2}.
inline double negativity(const DensityMatrix& rho_two_qubit) {
  if (rho_two_qubit.dim() != 4) throw std::invalid_argument("negativity: expected a two-qubit (4x4) state");
  const RealVector lambda = eigvals_hermitian(partial_transpose(rho_two_qubit.cleaned()));
  return std::max(0.0, lambda.cwiseAbs().sum() - 1.0);
}

// Two-site reduced state, factors ordered (i, j), re-Hermitized.
inline DensityMatrix reduced_pair(const DensityMatrix& rho, int i, int j) {
  const int n = qubit_count(rho.dim());
  detail::check_pair(i, j, n);
  const int keep[2] = {i, j};
  return partial_trace(rho, std::span<const int>(keep), n).cleaned();
}

inline DensityMatrix reduced_pair(const SectorState& s, int i, int j) {
  const int n = s.sector.n;
  detail::check_pair(i, j, n);
  const BasisIndex bi = site_bit(i, n), bj = site_bit(j, n);
  const BasisIndex pair_mask = bi | bj;
  auto local = [&](BasisIndex x) { return ((x & bi) ? 2 : 0) + ((x & bj) ? 1 : 0); };
  const auto& b = s.sector.basis;
  Matrix out = Matrix::Zero(4, 4);
  for (Index r = 0; r < s.sector.dim(); ++r) {
    const BasisIndex xr = b[static_cast<std::size_t>(r)];
    for (Index c = 0; c < s.sector.dim(); ++c) {
      const BasisIndex xc = b[static_cast<std::size_t>(c)];
      if ((xr & ~pair_mask) != (xc & ~pair_mask)) continue;
      out(local(xr), local(xc)) += s.rho.matrix()(r, c);
    }
  }
  return DensityMatrix(std::move(out)).cleaned();
}

inline double pair_negativity(const DensityMatrix& rho, int i, int j) { return negativity(reduced_pair(rho, i, j)); }

inline double pair_negativity(const SectorState& s, int i, int j) { return negativity(reduced_pair(s, i, j)); }

// <psi|rho|psi>
inline double fidelity_pure(const DensityMatrix& rho, const StateVector& psi) {
  if (psi.size() != rho.dim()) throw std::invalid_argument("fidelity_pure: dimension mismatch");
  return (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
}

inline double purity(const DensityMatrix& rho) {
  const Matrix& m = rho.matrix();
  // tr(rho^2) = sum_ij rho_ij rho_ji
  return (m.transpose().cwiseProduct(m)).sum().real();
}

struct DarkStateReport {
  double commutator_norm = 0.0;  // ||[H, rho]||_F
  double dissipator_norm = 0.0;  // ||sum_k D_k(rho)||_F

  [[nodiscard]] bool stationary(double tol = 1e-9) const { return commutator_norm < tol && dissipator_norm < tol; }
};

inline DarkStateReport dark_state_check(const Operator& h, const std::vector<LindbladTerm>& terms,
                                        const DensityMatrix& rho) {
  if (h.rows() != rho.dim()) throw std::invalid_argument("dark_state_check: dimension mismatch");
  const Matrix& m = rho.matrix();
  DarkStateReport r;
  r.commutator_norm = commutator(h, m).norm();
  Matrix diss = Matrix::Zero(m.rows(), m.cols());
  for (const auto& t : terms) {
    if (t.jump.rows() != m.rows()) throw std::invalid_argument("dark_state_check: jump dimension mismatch");
    const Operator ada = t.jump.adjoint() * t.jump;
    diss += t.rate * (t.jump * m * t.jump.adjoint() - 0.5 * anticommutator(ada, m));
  }
  r.dissipator_norm = diss.norm();
  return r;
}

// ---------------------------------------------------------------------------
// Tables

struct CorrelatorEntry {
  int i;
  int j;
  Complex value;
  double abs_value;
};

struct CorrelatorTable {
  int n = 0;
  std::vector<CorrelatorEntry> entries;
};

struct NegativityEntry {
  int i;
  int j;
  double value;
};

struct NegativityTable {
  int n = 0;
  std::vector<NegativityEntry> entries;
};

template <class State>
CorrelatorTable correlator_table(const State& state, int n, const std::vector<std::pair<int, int>>& pairs) {
  CorrelatorTable t{n, {}};
  for (auto [i, j] : pairs) {
    const Complex v = correlator(state, i, j);
    t.entries.push_back({i, j, v, std::abs(v)});
  }
  return t;
}

template <class State>
NegativityTable negativity_table(const State& state, int n, const std::vector<std::pair<int, int>>& pairs) {
  NegativityTable t{n, {}};
  for (auto [i, j] : pairs) t.entries.push_back({i, j, pair_negativity(state, i, j)});
  return t;
}

// (1, j) for j = 2..n
inline std::vector<std::pair<int, int>> pairs_from_first(int n) {
  std::vector<std::pair<int, int>> out;
  for (int j = 2; j <= n; ++j) out.emplace_back(1, j);
  return out;
}

}  // namespace qchain
