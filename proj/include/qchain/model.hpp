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

// Qubit-chain models: a primary pair (qubits 1, 2) driven by the bi-local
// jump b = (s1+ + s2+)(s1- - s2-), with coherent XX secondary chains attached
// either on the right (geometry A) or on both sides (geometry B).
//
// Linear site order:
//   A:  1, 2, 3R, 4R, ..., nR                      -> 1, 2, 3, ..., n
//   B:  (n/2+1)L, ..., 4L, 3L, 1, 2, 3R, ..., (n/2+1)R -> 1, ..., n
// so geometry B is a plain 1D chain with the primary pair at n/2, n/2+1 and
// the bond between them missing.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qchain/local_terms.hpp"
#include "qchain/operator_core.hpp"

namespace qchain {

enum class Geometry { A, B };

inline const char* to_string(Geometry g) { return g == Geometry::A ? "A" : "B"; }

inline Geometry parse_geometry(const std::string& s) {
  if (s == "A" || s == "a") return Geometry::A;
  if (s == "B" || s == "b") return Geometry::B;
  throw std::invalid_argument("unknown geometry '" + s + "' (expected A or B)");
}

// All frequencies in units of delta.
struct ChainConfig {
  Geometry geometry = Geometry::A;
  int n = 4;
  double delta = 1.0;
  double kappa = 0.2;
  double theta = 0.2;
  double gamma_engineered = 0.1;
  double gamma_dephasing = 0.0;

  void validate() const {
    if (n % 2 != 0) throw std::invalid_argument("ChainConfig: n must be even (got " + std::to_string(n) + ")");
    if (geometry == Geometry::A && n < 2) throw std::invalid_argument("ChainConfig: geometry A needs n >= 2");
    if (geometry == Geometry::B && n < 4) throw std::invalid_argument("ChainConfig: geometry B needs n >= 4");
    if (n > 62) throw std::invalid_argument("ChainConfig: n too large");
    if (!(delta > 0.0)) throw std::invalid_argument("ChainConfig: delta must be positive");
    if (!(kappa >= 0.0) || !(theta >= 0.0) || !(gamma_engineered >= 0.0) || !(gamma_dephasing >= 0.0)) {
      throw std::invalid_argument("ChainConfig: couplings and rates must be non-negative");
    }
  }

  [[nodiscard]] bool uniform_coupling() const { return kappa == theta; }
};

enum class Chain { Primary, Left, Right };

// Site label in chain notation: primary 1/2, or secondary index j >= 3.
struct SiteLabel {
  Chain chain = Chain::Primary;
  int index = 1;

  friend bool operator==(const SiteLabel&, const SiteLabel&) = default;
};

class SiteMap {
 public:
  SiteMap(Geometry g, int n) : geometry_(g), n_(n) {
    if (n % 2 != 0 || n < 2 || (g == Geometry::B && n < 4)) throw std::invalid_argument("SiteMap: invalid qubit count");
  }

  static SiteMap for_config(const ChainConfig& cfg) { return SiteMap(cfg.geometry, cfg.n); }

  [[nodiscard]] int qubits() const noexcept { return n_; }
  [[nodiscard]] Geometry geometry() const noexcept { return geometry_; }

  [[nodiscard]] int linear(SiteLabel l) const {
    const int h = n_ / 2;
    if (geometry_ == Geometry::A) {
      if (l.chain == Chain::Primary && (l.index == 1 || l.index == 2)) return l.index;
      if (l.chain == Chain::Right && l.index >= 3 && l.index <= n_) return l.index;
    } else {
      if (l.chain == Chain::Primary && l.index == 1) return h;
      if (l.chain == Chain::Primary && l.index == 2) return h + 1;
      if (l.chain == Chain::Left && l.index >= 3 && l.index <= h + 1) return h + 2 - l.index;
      if (l.chain == Chain::Right && l.index >= 3 && l.index <= h + 1) return h - 1 + l.index;
    }
    throw std::out_of_range("SiteMap: label not present in this geometry");
  }

  [[nodiscard]] SiteLabel label(int linear_site) const {
    if (linear_site < 1 || linear_site > n_) throw std::out_of_range("SiteMap: linear site out of range");
    const int h = n_ / 2;
    if (geometry_ == Geometry::A) {
      if (linear_site <= 2) return {Chain::Primary, linear_site};
      return {Chain::Right, linear_site};
    }
    if (linear_site == h) return {Chain::Primary, 1};
    if (linear_site == h + 1) return {Chain::Primary, 2};
    if (linear_site < h) return {Chain::Left, h + 2 - linear_site};
    return {Chain::Right, linear_site - h + 1};
  }

  [[nodiscard]] int primary1() const { return linear({Chain::Primary, 1}); }
  [[nodiscard]] int primary2() const { return linear({Chain::Primary, 2}); }

  // Mirror partner about the chain centre (geometry B).
  [[nodiscard]] int mirror(int linear_site) const { return n_ + 1 - linear_site; }

 private:
  Geometry geometry_;
  int n_;
};

// Jump operator with its rate; the dissipator is rate * (A rho A^dag - {A^dag A, rho}/2).
struct LindbladTerm {
  Operator jump;
  double rate = 0.0;
};

// Same, kept symbolic for sector restriction at large n.
struct LocalLindbladTerm {
  OperatorSum jump;
  double rate = 0.0;
};

struct ModelTerms {
  OperatorSum hamiltonian;
  std::vector<LocalLindbladTerm> jumps;
};

inline OperatorSum hamiltonian_terms(const ChainConfig& cfg) {
  cfg.validate();
  const int n = cfg.n;
  OperatorSum h(n);
  for (int s = 1; s <= n; ++s) h.add(cfg.delta, {{s, LocalOp::Z}});

  const SiteMap map = SiteMap::for_config(cfg);
  if (cfg.geometry == Geometry::A) {
    if (n >= 3) h.add_hopping(cfg.theta, 2, 3);
    for (int s = 3; s < n; ++s) h.add_hopping(cfg.kappa, s, s + 1);
  } else {
    const int p1 = map.primary1(), p2 = map.primary2();
    for (int s = 1; s < p1 - 1; ++s) h.add_hopping(cfg.kappa, s, s + 1);
    h.add_hopping(cfg.theta, p1 - 1, p1);
    h.add_hopping(cfg.theta, p2, p2 + 1);
    for (int s = p2 + 1; s < n; ++s) h.add_hopping(cfg.kappa, s, s + 1);
  }
  return h;
}

// b = (s_i^+ + s_j^+)(s_i^- - s_j^-) on the primary pair.
inline OperatorSum bilocal_jump_terms(const SiteMap& map) {
  const int i = map.primary1(), j = map.primary2();
  OperatorSum b(map.qubits());
  b.add(1.0, {{i, LocalOp::Number}});
  b.add(-1.0, {{i, LocalOp::Plus}, {j, LocalOp::Minus}});
  b.add(1.0, {{j, LocalOp::Plus}, {i, LocalOp::Minus}});
  b.add(-1.0, {{j, LocalOp::Number}});
  return b;
}

inline std::vector<LocalLindbladTerm> dephasing_jump_terms(const ChainConfig& cfg, const SiteMap& map) {
  if (cfg.geometry != Geometry::B) throw std::invalid_argument("dephasing jumps are defined for geometry B");
  std::vector<LocalLindbladTerm> out;
  for (int s : {map.primary1(), map.primary2()}) {
    OperatorSum z(cfg.n);
    z.add(1.0, {{s, LocalOp::Z}});
    out.push_back({std::move(z), cfg.gamma_dephasing});
  }
  return out;
}

inline ModelTerms model_terms(const ChainConfig& cfg) {
  cfg.validate();
  const SiteMap map = SiteMap::for_config(cfg);
  ModelTerms m{hamiltonian_terms(cfg), {}};
  m.jumps.push_back({bilocal_jump_terms(map), cfg.gamma_engineered});
  if (cfg.geometry == Geometry::B) {
    for (auto& t : dephasing_jump_terms(cfg, map)) m.jumps.push_back(std::move(t));
  }
  return m;
}

inline Operator build_hamiltonian(const ChainConfig& cfg) { return hamiltonian_terms(cfg).dense(); }

inline LindbladTerm build_bilocal_jump(const ChainConfig& cfg, const SiteMap& map) {
  return {bilocal_jump_terms(map).dense(), cfg.gamma_engineered};
}

inline std::vector<LindbladTerm> build_dephasing_jumps(const ChainConfig& cfg, const SiteMap& map) {
  std::vector<LindbladTerm> out;
  for (const auto& t : dephasing_jump_terms(cfg, map)) out.push_back({t.jump.dense(), t.rate});
  return out;
}

// Bi-local jump plus, for geometry B, the two dephasing channels.
inline std::vector<LindbladTerm> build_jumps(const ChainConfig& cfg) {
  const SiteMap map = SiteMap::for_config(cfg);
  std::vector<LindbladTerm> out{build_bilocal_jump(cfg, map)};
  if (cfg.geometry == Geometry::B) {
    for (auto& t : build_dephasing_jumps(cfg, map)) out.push_back(std::move(t));
  }
  return out;
}

// Primary qubit 1 up, everything else down.
inline BasisIndex initial_basis_index(const ChainConfig& cfg) {
  const SiteMap map = SiteMap::for_config(cfg);
  return site_bit(map.primary1(), cfg.n);
}

inline DensityMatrix initial_state(const ChainConfig& cfg, const SiteMap& map) {
  cfg.validate();
  if (cfg.n > kMaxDenseQubits) throw std::invalid_argument("initial_state: too many qubits for a dense state");
  return DensityMatrix::basis_state(Index{1} << cfg.n, static_cast<Index>(site_bit(map.primary1(), cfg.n)));
}

inline Operator excitation_number(int n) {
  if (n < 1 || n > kMaxDenseQubits) throw std::invalid_argument("excitation_number: qubit count out of range");
  const Index dim = Index{1} << n;
  Operator out = Operator::Zero(dim, dim);
  for (Index x = 0; x < dim; ++x) out(x, x) = static_cast<double>(std::popcount(static_cast<BasisIndex>(x)));
  return out;
}

// Ascending basis indices with exactly k excitations.
inline std::vector<BasisIndex> sector_basis(int n, int k) {
  if (n < 1 || n > 62) throw std::invalid_argument("sector_basis: qubit count out of range");
  if (k < 0 || k > n) throw std::out_of_range("sector_basis: excitation count out of range");
  std::vector<BasisIndex> out;
  if (k == 0) return {0};
  // Gosper's hack: next integer with the same popcount.
  BasisIndex x = (BasisIndex{1} << k) - 1;
  const BasisIndex limit = BasisIndex{1} << n;
  while (x < limit) {
    out.push_back(x);
    const BasisIndex c = x & (~x + 1);
    const BasisIndex r = x + c;
    x = (((r ^ x) >> 2) / c) | r;
  }
  return out;
}

// Single-excitation amplitudes (linear site, amplitude) of the geometry-A
// dark state: equal weight on qubits 1, 2 and every even secondary site 2m,
// sign (-1)^(m+1) on site 2m.
inline std::vector<std::pair<int, double>> w_state_components(int n) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("reference_w_state: n must be even and >= 4");
  const int m_total = n / 2 + 1;
  const double a = 1.0 / std::sqrt(static_cast<double>(m_total));
  std::vector<std::pair<int, double>> out{{1, a}, {2, a}};
  for (int m = 2; m <= n / 2; ++m) out.emplace_back(2 * m, (m % 2 == 0 ? -a : a));
  return out;
}

inline StateVector reference_w_state(int n) {
  const auto comps = w_state_components(n);
  if (n > kMaxDenseQubits) throw std::invalid_argument("reference_w_state: too many qubits for a dense state");
  StateVector psi = StateVector::Zero(Index{1} << n);
  for (auto [site, amp] : comps) psi(static_cast<Index>(site_bit(site, n))) = amp;
  return psi;
}

// |Phi+->, eigenstates of the n = 4 geometry-B Hamiltonian symmetric in the
// primary pair, with energies -(2 delta +- kappa).
inline std::pair<StateVector, StateVector> reference_phi_states(const ChainConfig& cfg) {
  cfg.validate();
  if (cfg.geometry != Geometry::B || cfg.n != 4) throw std::invalid_argument("reference_phi_states: needs geometry B, n = 4");
  if (!cfg.uniform_coupling()) throw std::invalid_argument("reference_phi_states: requires theta == kappa");
  const SiteMap map = SiteMap::for_config(cfg);
  const int l3 = map.linear({Chain::Left, 3}), r3 = map.linear({Chain::Right, 3});
  auto make = [&](double secondary_sign) {
    StateVector psi = StateVector::Zero(16);
    psi(static_cast<Index>(site_bit(l3, 4))) = 0.5 * secondary_sign;
    psi(static_cast<Index>(site_bit(r3, 4))) = 0.5 * secondary_sign;
    psi(static_cast<Index>(site_bit(map.primary1(), 4))) = 0.5;
    psi(static_cast<Index>(site_bit(map.primary2(), 4))) = 0.5;
    return psi;
  };
  return {make(-1.0), make(+1.0)};
}

}  // namespace qchain
