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

// Lindblad generators, time evolution and steady states.
//
//   d rho / dt = -i[H, rho] + sum_k g_k (A_k rho A_k^dag - {A_k^dag A_k, rho} / 2)
//
// Two interchangeable generator representations satisfy LindbladRhs:
//   Liouvillian        dense d^2 x d^2 superoperator on column-major vec(rho);
//                      used in excitation sectors and small full spaces.
//   LindbladGenerator  matrix-free, sparse H and jumps; used for full-space
//                      trajectories where d^2 x d^2 storage is out of reach.

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SVD>
#include <Eigen/SparseCore>
#include <unsupported/Eigen/MatrixFunctions>

#include "qchain/integrator.hpp"
#include "qchain/model.hpp"
#include "qchain/operator_core.hpp"

namespace qchain {

template <class G>
concept LindbladRhs = requires(const G& g, const Matrix& rho) {
  { g.dim() } -> std::convertible_to<Index>;
  { g.apply(rho) } -> std::convertible_to<Matrix>;
};

namespace detail {

inline void check_generator_inputs(const Operator& h, const std::vector<LindbladTerm>& terms) {
  if (h.rows() != h.cols() || h.rows() == 0) throw std::invalid_argument("Lindblad generator: H must be square");
  const double scale = std::max(1.0, max_abs(h));
  if (!(hermiticity_error(h) <= 1e-12 * scale)) throw std::invalid_argument("Lindblad generator: H is not Hermitian");
  for (const auto& t : terms) {
    if (t.jump.rows() != h.rows() || t.jump.cols() != h.cols()) {
      throw std::invalid_argument("Lindblad generator: jump dimension does not match H");
    }
    if (!(t.rate >= 0.0)) throw std::invalid_argument("Lindblad generator: negative rate");
  }
}

inline Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

inline Matrix unvec(const Vector& v, Index d) { return Eigen::Map<const Matrix>(v.data(), d, d); }

}  // namespace detail

// Dense superoperator. vec(A rho B) = (B^T (x) A) vec(rho).
class Liouvillian {
 public:
  Liouvillian() = default;
  Liouvillian(Index dim, Matrix super) : dim_(dim), super_(std::move(super)) {
    if (super_.rows() != dim * dim || super_.cols() != dim * dim) throw std::invalid_argument("Liouvillian: bad shape");
  }

  [[nodiscard]] Index dim() const noexcept { return dim_; }
  [[nodiscard]] const Matrix& matrix() const noexcept { return super_; }

  [[nodiscard]] Matrix apply(const Matrix& rho) const {
    return detail::unvec(super_ * detail::vec(rho), dim_);
  }

 private:
  Index dim_ = 0;
  Matrix super_;
};

// Practical ceiling for dense superoperators (d^2 = 4096).
inline constexpr Index kMaxDenseLiouvillianDim = 64;

inline Liouvillian build_liouvillian(const Operator& h, const std::vector<LindbladTerm>& terms) {
  detail::check_generator_inputs(h, terms);
  const Index d = h.rows();
  if (d > kMaxDenseLiouvillianDim) {
    throw std::invalid_argument("build_liouvillian: dimension " + std::to_string(d) +
                                " too large for a dense superoperator; use LindbladGenerator");
  }
  const Operator id = Operator::Identity(d, d);
  Matrix l = -kI * (tensor(id, h) - tensor(h.transpose(), id));
  for (const auto& t : terms) {
    if (t.rate == 0.0) continue;
    const Operator ada = t.jump.adjoint() * t.jump;
    l += t.rate * (tensor(t.jump.conjugate(), t.jump) - 0.5 * tensor(id, ada) - 0.5 * tensor(ada.transpose(), id));
  }
  return Liouvillian(d, std::move(l));
}

// Matrix-free generator with sparse operator storage.
class LindbladGenerator {
 public:
  using Sparse = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

  LindbladGenerator(const Operator& h, const std::vector<LindbladTerm>& terms) : dim_(h.rows()) {
    detail::check_generator_inputs(h, terms);
    // -i H_eff with H_eff = H - (i/2) sum g A^dag A, so the anticommutator
    // part folds into two products.
    Operator heff = h;
    for (const auto& t : terms) {
      if (t.rate == 0.0) continue;
      heff -= 0.5 * kI * t.rate * (t.jump.adjoint() * t.jump);
      jumps_.push_back(t.jump.sparseView());
      jumps_dag_.push_back(t.jump.adjoint().sparseView());
      rates_.push_back(t.rate);
    }
    minus_i_heff_ = Operator(-kI * heff).sparseView();
    i_heff_dag_ = Operator(kI * heff.adjoint()).sparseView();
  }

  [[nodiscard]] Index dim() const noexcept { return dim_; }

  [[nodiscard]] Matrix apply(const Matrix& rho) const {
    // -i H_eff rho + i rho H_eff^dag + sum g A rho A^dag
    Matrix out = minus_i_heff_ * rho;
    out += (rho * i_heff_dag_).eval();
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
      const Matrix ar = jumps_[k] * rho;
      out += rates_[k] * (ar * jumps_dag_[k]);
    }
    return out;
  }

 private:
  Index dim_;
  Sparse minus_i_heff_, i_heff_dag_;
  std::vector<Sparse> jumps_, jumps_dag_;
  std::vector<double> rates_;
};

template <LindbladRhs G>
double residual_norm(const G& gen, const DensityMatrix& rho) {
  return gen.apply(rho.matrix()).norm();
}

// ---------------------------------------------------------------------------
// Excitation sectors

struct Sector {
  int n = 0;
  int k = 0;
  std::vector<BasisIndex> basis;  // ascending

  [[nodiscard]] Index dim() const noexcept { return static_cast<Index>(basis.size()); }

  static Sector of(int n, int k) { return {n, k, sector_basis(n, k)}; }

  [[nodiscard]] Index position(BasisIndex x) const {
    auto it = std::lower_bound(basis.begin(), basis.end(), x);
    if (it == basis.end() || *it != x) return -1;
    return static_cast<Index>(it - basis.begin());
  }
};

// State supported on one excitation sector.
struct SectorState {
  Sector sector;
  DensityMatrix rho;
};

inline DensityMatrix embed_sector_state(const SectorState& s) {
  if (s.sector.n > kMaxDenseQubits) throw std::invalid_argument("embed_sector_state: too many qubits");
  const Index full = Index{1} << s.sector.n;
  Matrix out = Matrix::Zero(full, full);
  const auto& b = s.sector.basis;
  for (Index r = 0; r < s.sector.dim(); ++r)
    for (Index c = 0; c < s.sector.dim(); ++c)
      out(static_cast<Index>(b[r]), static_cast<Index>(b[c])) = s.rho.matrix()(r, c);
  return DensityMatrix(std::move(out));
}

inline Matrix restrict_to_sector(const Matrix& full, const Sector& sector) {
  const auto& b = sector.basis;
  Matrix out(sector.dim(), sector.dim());
  for (Index r = 0; r < sector.dim(); ++r)
    for (Index c = 0; c < sector.dim(); ++c) out(r, c) = full(static_cast<Index>(b[r]), static_cast<Index>(b[c]));
  return out;
}

inline SectorState restrict_state(const DensityMatrix& full, const Sector& sector) {
  return {sector, DensityMatrix(restrict_to_sector(full.matrix(), sector))};
}

struct ReducedModel {
  Sector sector;
  Operator hamiltonian;
  std::vector<LindbladTerm> terms;
};

inline constexpr double kConservationTol = 1e-12;

// Restricts H and the jumps to the k-excitation sector after checking that
// each of them commutes with the total excitation number.
inline ReducedModel sector_reduce(const Operator& h, const std::vector<LindbladTerm>& terms, int k) {
  detail::check_generator_inputs(h, terms);
  const int n = qubit_count(h.rows());
  const Operator number = excitation_number(n);
  auto conserving = [&](const Operator& a) { return max_abs(commutator(a, number)) < kConservationTol; };
  if (!conserving(h)) throw std::invalid_argument("sector_reduce: Hamiltonian does not conserve excitation number");
  for (const auto& t : terms) {
    if (!conserving(t.jump)) throw std::invalid_argument("sector_reduce: jump operator does not conserve excitation number");
  }
  ReducedModel out{Sector::of(n, k), {}, {}};
  out.hamiltonian = restrict_to_sector(h, out.sector);
  for (const auto& t : terms) out.terms.push_back({restrict_to_sector(t.jump, out.sector), t.rate});
  return out;
}

// Same reduction built directly from the symbolic terms, without forming the
// 2^n space.
inline ReducedModel sector_model(const ChainConfig& cfg, int k) {
  const ModelTerms m = model_terms(cfg);
  if (!m.hamiltonian.conserves_excitations()) throw std::invalid_argument("sector_model: Hamiltonian is not conserving");
  ReducedModel out{Sector::of(cfg.n, k), {}, {}};
  out.hamiltonian = m.hamiltonian.restricted(out.sector.basis);
  for (const auto& j : m.jumps) {
    if (!j.jump.conserves_excitations()) throw std::invalid_argument("sector_model: jump is not conserving");
    out.terms.push_back({j.jump.restricted(out.sector.basis), j.rate});
  }
  return out;
}

inline SectorState initial_sector_state(const ChainConfig& cfg, const Sector& sector) {
  const Index pos = sector.position(initial_basis_index(cfg));
  if (pos < 0) throw std::invalid_argument("initial_sector_state: initial state outside the sector");
  return {sector, DensityMatrix::basis_state(sector.dim(), pos)};
}

// ---------------------------------------------------------------------------
// Time evolution

struct EvolutionResult {
  std::vector<double> times;
  std::vector<DensityMatrix> states;  // raw integrator output
};

// Uniform grid dt_out, 2 dt_out, ..., up to and including t_end.
inline std::vector<double> output_grid(double t_end, double dt_out) {
  if (!(t_end > 0.0)) throw std::invalid_argument("evolve: t_end must be positive");
  if (!(dt_out > 0.0)) throw std::invalid_argument("evolve: dt_out must be positive");
  std::vector<double> grid;
  const auto steps = static_cast<long>(std::floor(t_end / dt_out + 1e-9));
  for (long i = 1; i <= steps; ++i) grid.push_back(static_cast<double>(i) * dt_out);
  if (grid.empty() || grid.back() < t_end - 1e-12 * t_end) grid.push_back(t_end);
  return grid;
}

// Streams snapshots to observer(t, rho); returning false stops the run.
template <LindbladRhs G, class Observer>
double evolve_observed(const DensityMatrix& rho0, const G& gen, double t_end, double dt_out, Observer&& observer,
                       const IntegratorOptions& opt = {}, IntegratorStats* stats = nullptr) {
  if (rho0.dim() != gen.dim()) throw std::invalid_argument("evolve: state dimension does not match generator");
  const std::vector<double> grid = output_grid(t_end, dt_out);
  auto rhs = [&gen](const Matrix& m) { return gen.apply(m); };
  auto obs = [&observer](double t, const Matrix& m) { return static_cast<bool>(observer(t, DensityMatrix(m))); };
  return integrate_dopri5(rhs, rho0.matrix(), 0.0, std::span<const double>(grid), obs, opt, stats);
}

// Snapshots at t = 0, dt_out, 2 dt_out, ..., t_end.
template <LindbladRhs G>
EvolutionResult evolve(const DensityMatrix& rho0, const G& gen, double t_end, double dt_out,
                       const IntegratorOptions& opt = {}) {
  EvolutionResult res;
  res.times.push_back(0.0);
  res.states.push_back(rho0);
  evolve_observed(
      rho0, gen, t_end, dt_out,
      [&res](double t, const DensityMatrix& rho) {
        res.times.push_back(t);
        res.states.push_back(rho);
        return true;
      },
      opt);
  return res;
}

// Exact stepping with exp(L dt_out) for dense superoperators, same grid and
// snapshot layout as evolve().
inline EvolutionResult evolve_exact(const DensityMatrix& rho0, const Liouvillian& l, double t_end, double dt_out) {
  if (rho0.dim() != l.dim()) throw std::invalid_argument("evolve_exact: state dimension does not match generator");
  const std::vector<double> grid = output_grid(t_end, dt_out);
  EvolutionResult res;
  res.times.push_back(0.0);
  res.states.push_back(rho0);
  Vector v = detail::vec(rho0.matrix());
  double t = 0.0, h_cached = -1.0;
  Matrix p;
  for (double target : grid) {
    const double h = target - t;
    if (std::abs(h - h_cached) > 1e-12 * std::max(1.0, h)) {
      p = (l.matrix() * h).exp();
      h_cached = h;
    }
    v = p * v;
    t = target;
    res.times.push_back(t);
    res.states.emplace_back(detail::unvec(v, l.dim()));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Steady states

struct SteadyStateOptions {
  double tol = 1e-10;        // on ||L(rho)||_F
  double t_max = 1e4;
  double initial_step = 1.0;   // propagator doubling: first step
  double check_interval = 1.0; // integrator path: residual check spacing
  IntegratorOptions integrator{};
};

struct SteadyStateResult {
  DensityMatrix state;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  double elapsed_time = 0.0;
};

// Default budget: 50/Gamma * (n/2)^3; the sector gap closes roughly as n^-3.
inline double default_t_max(const ChainConfig& cfg) {
  const double half = 0.5 * cfg.n;
  const double rate = cfg.gamma_engineered > 0.0 ? cfg.gamma_engineered : 0.1;
  return 50.0 / rate * half * half * half;
}

namespace detail {

inline SteadyStateResult finish(const Matrix& raw, double residual, double tol, double t) {
  SteadyStateResult r;
  r.state = DensityMatrix(raw).cleaned();
  r.residual = residual;
  r.converged = residual < tol;
  r.elapsed_time = t;
  return r;
}

}  // namespace detail

// Exact propagation with P = exp(L h), then P <- P^2 at every step, so the
// simulated time doubles per step. Stops at the first residual below tol or
// at t_max.
inline SteadyStateResult steady_state_from_initial(const DensityMatrix& rho0, const Liouvillian& l,
                                                   const SteadyStateOptions& opt = {}) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("steady_state_from_initial: tol must be positive");
  if (rho0.dim() != l.dim()) throw std::invalid_argument("steady_state_from_initial: dimension mismatch");
  const Index d = l.dim();
  Vector v = detail::vec(rho0.matrix());
  double residual = (l.matrix() * v).norm();
  if (residual < opt.tol) return detail::finish(rho0.matrix(), residual, opt.tol, 0.0);

  double t = 0.0;
  double h = std::min(opt.initial_step, opt.t_max);
  Matrix p = (l.matrix() * h).exp();
  while (true) {
    v = p * v;
    t += h;
    residual = (l.matrix() * v).norm();
    if (residual < opt.tol || t >= opt.t_max * (1.0 - 1e-12)) break;
    if (t + 2.0 * h <= opt.t_max) {
      p = p * p;
      h *= 2.0;
    } else {
      h = opt.t_max - t;
      p = (l.matrix() * h).exp();
    }
  }
  return detail::finish(detail::unvec(v, d), residual, opt.tol, t);
}

// Integrator path for generators without a dense superoperator.
inline SteadyStateResult steady_state_from_initial(const DensityMatrix& rho0, const LindbladGenerator& gen,
                                                   const SteadyStateOptions& opt = {}) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("steady_state_from_initial: tol must be positive");
  double residual = residual_norm(gen, rho0);
  if (residual < opt.tol) return detail::finish(rho0.matrix(), residual, opt.tol, 0.0);
  Matrix last = rho0.matrix();
  double t_last = 0.0;
  evolve_observed(
      rho0, gen, opt.t_max, opt.check_interval,
      [&](double t, const DensityMatrix& rho) {
        last = rho.matrix();
        t_last = t;
        residual = gen.apply(last).norm();
        return residual >= opt.tol;
      },
      opt.integrator);
  return detail::finish(last, residual, opt.tol, t_last);
}

struct StationaryCandidate {
  Operator matrix;        // Hermitian
  bool trace_normalized;  // false when the element is traceless
};

struct NullspaceResult {
  std::vector<StationaryCandidate> candidates;
  int degeneracy = 0;
};

// Basis of ker L from the SVD (singular values below rel_tol * sigma_max),
// rotated to a Hermitian basis. All elements are returned; no attempt is
// made to single out a physical state.
inline NullspaceResult steady_state_nullspace(const Liouvillian& l, double rel_tol = 1e-10) {
  const Index d = l.dim();
  Eigen::BDCSVD<Matrix> svd(l.matrix(), Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  const double cutoff = rel_tol * std::max(sv(0), std::numeric_limits<double>::min());
  std::vector<Vector> kernel;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) < cutoff) kernel.emplace_back(svd.matrixV().col(i));
  }

  // ker L is closed under rho -> rho^dag, so Hermitian and anti-Hermitian
  // parts of the kernel vectors span it; orthonormalize them over the reals.
  const auto dim = static_cast<Index>(kernel.size());
  Eigen::MatrixXd real_frame(2 * d * d, 2 * dim);
  for (Index i = 0; i < dim; ++i) {
    const Matrix m = detail::unvec(kernel[static_cast<std::size_t>(i)], d);
    const Matrix herm = 0.5 * (m + m.adjoint());
    const Matrix anti = (m - m.adjoint()) / (2.0 * kI);
    const Vector hv = detail::vec(herm), av = detail::vec(anti);
    real_frame.col(2 * i) << hv.real(), hv.imag();
    real_frame.col(2 * i + 1) << av.real(), av.imag();
  }

  NullspaceResult out;
  out.degeneracy = static_cast<int>(dim);
  if (dim == 0) return out;
  Eigen::BDCSVD<Eigen::MatrixXd> frame_svd(real_frame, Eigen::ComputeThinU);
  for (Index i = 0; i < dim; ++i) {
    const Eigen::VectorXd u = frame_svd.matrixU().col(i);
    Vector c(d * d);
    c.real() = u.head(d * d);
    c.imag() = u.tail(d * d);
    Matrix m = detail::unvec(c, d);
    m = 0.5 * (m + m.adjoint());
    const Complex tr = m.trace();
    StationaryCandidate cand{m, false};
    if (std::abs(tr) > 1e-8) {
      cand.matrix /= tr.real();
      cand.trace_normalized = true;
    }
    out.candidates.push_back(std::move(cand));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trajectory invariants

struct TrajectoryAudit {
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = std::numeric_limits<double>::infinity();
  double max_number_drift = 0.0;
  double max_purity = 0.0;
  std::size_t snapshots = 0;

  void add(const DensityMatrix& rho, const Operator* number, double n0) {
    const DensityDiagnostics d = diagnose(rho);
    max_trace_error = std::max(max_trace_error, d.trace_error);
    max_hermiticity_error = std::max(max_hermiticity_error, d.hermiticity_error);
    min_eigenvalue = std::min(min_eigenvalue, d.min_eigenvalue);
    const Matrix& m = rho.matrix();
    max_purity = std::max(max_purity, (m * m).trace().real());
    if (number) max_number_drift = std::max(max_number_drift, std::abs((m * *number).trace().real() - n0));
    ++snapshots;
  }

  [[nodiscard]] bool within(double tol = 1e-9) const {
    return max_trace_error < tol && max_hermiticity_error < tol && min_eigenvalue >= -tol && max_number_drift < tol &&
           max_purity <= 1.0 + tol;
  }
};

// number may be the full-space N or its sector restriction (or null).
inline TrajectoryAudit audit_trajectory(const EvolutionResult& r, const Operator* number = nullptr) {
  TrajectoryAudit a;
  if (r.states.empty()) return a;
  const double n0 = number ? (r.states.front().matrix() * *number).trace().real() : 0.0;
  for (const auto& s : r.states) a.add(s, number, n0);
  return a;
}

}  // namespace qchain
