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

#include <gtest/gtest.h>

#include <random>

#include "qchain/operator_core.hpp"
#include "test_support.hpp"

namespace qchain {
namespace {

using test::ket;

TEST(Tensor, IdentityTimesIdentity) {
  EXPECT_EQ(max_abs(tensor(pauli::identity(), pauli::identity()) - Operator::Identity(4, 4)), 0.0);
}

TEST(Tensor, SigmaZOnFirstFactor) {
  const StateVector ud = ket("ud");
  EXPECT_LT((tensor(pauli::z(), pauli::identity()) * ud - ud).norm(), 1e-15);
}

TEST(Tensor, RaiseLower) {
  EXPECT_LT((tensor(pauli::plus(), pauli::minus()) * ket("du") - ket("ud")).norm(), 1e-15);
}

TEST(Tensor, AssociativeExactly) {
  // Gaussian-integer entries keep every product exact.
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> u(-9, 9);
  auto gaussian_integers = [&](Index d) {
    Matrix m(d, d);
    for (Index c = 0; c < d; ++c)
      for (Index r = 0; r < d; ++r) m(r, c) = Complex(u(rng), u(rng));
    return m;
  };
  const Matrix a = gaussian_integers(2), b = gaussian_integers(3), c = gaussian_integers(2);
  EXPECT_EQ(max_abs(tensor(tensor(a, b), c) - tensor(a, tensor(b, c))), 0.0);
  const Operator ops[] = {pauli::z(), pauli::plus(), pauli::y()};
  EXPECT_EQ(max_abs(tensor(tensor(ops[0], ops[1]), ops[2]) - tensor(ops[0], tensor(ops[1], ops[2]))), 0.0);
}

TEST(Tensor, AssociativeToRoundingForGeneralEntries) {
  std::mt19937_64 rng(8);
  const Matrix a = test::random_matrix(2, rng), b = test::random_matrix(3, rng), c = test::random_matrix(2, rng);
  EXPECT_LT(max_abs(tensor(tensor(a, b), c) - tensor(a, tensor(b, c))), 1e-14);
}

TEST(Embed, MatchesTensor) {
  EXPECT_EQ(max_abs(embed(pauli::z(), 1, 2) - tensor(pauli::z(), pauli::identity())), 0.0);
  EXPECT_EQ(max_abs(embed(pauli::plus(), 3, 3) - tensor({pauli::identity(), pauli::identity(), pauli::plus()})), 0.0);
}

TEST(Embed, NumberOperatorOnSecondSite) {
  const StateVector du = ket("du");
  EXPECT_LT((embed(pauli::plus(), 2, 2) * embed(pauli::minus(), 2, 2) * du - du).norm(), 1e-15);
}

TEST(Embed, DisjointSitesCommute) {
  EXPECT_EQ(max_abs(commutator(embed(pauli::z(), 1, 3), embed(pauli::z(), 2, 3))), 0.0);
  const Operator ops[] = {pauli::plus(), pauli::minus(), pauli::x(), pauli::y(), pauli::z()};
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      if (i == j) continue;
      for (const auto& a : ops)
        for (const auto& b : ops) EXPECT_EQ(max_abs(commutator(embed(a, i, 3), embed(b, j, 3))), 0.0);
    }
}

TEST(Embed, RejectsBadSite) {
  EXPECT_THROW(embed(pauli::z(), 0, 2), std::out_of_range);
  EXPECT_THROW(embed(pauli::z(), 3, 2), std::out_of_range);
}

TEST(PartialTrace, BellMarginalIsMaximallyMixed) {
  const DensityMatrix r = partial_trace(DensityMatrix::pure(test::bell_plus()), {1}, 2);
  EXPECT_LT(max_abs(r.matrix() - Matrix::Identity(2, 2) / 2.0), 1e-15);
}

TEST(PartialTrace, ProductState) {
  const DensityMatrix r = partial_trace(DensityMatrix::pure(ket("ud")), {2}, 2);
  EXPECT_LT(max_abs(r.matrix() - DensityMatrix::pure(ket("d")).matrix()), 1e-15);
}

TEST(PartialTrace, ClosedFormStateOnSitesOneAndFour) {
  // (|uddd> + |dudd> - |dddu>)/sqrt(3), written out directly.
  const StateVector psi = (ket("uddd") + ket("dudd") - ket("dddu")) / std::sqrt(3.0);
  const DensityMatrix r = partial_trace(DensityMatrix::pure(psi), {1, 4}, 4);
  const StateVector psi_minus = (ket("ud") - ket("du")) / std::sqrt(2.0);
  const Matrix expected = (2.0 / 3.0) * psi_minus * psi_minus.adjoint() + (1.0 / 3.0) * ket("dd") * ket("dd").adjoint();
  EXPECT_LT(max_abs(r.matrix() - expected), 1e-15);
}

TEST(PartialTrace, KeepOrderFollowsArgument) {
  const DensityMatrix rho = DensityMatrix::pure(ket("udd"));
  EXPECT_LT(max_abs(partial_trace(rho, {1, 3}, 3).matrix() - DensityMatrix::pure(ket("ud")).matrix()), 1e-15);
  EXPECT_LT(max_abs(partial_trace(rho, {3, 1}, 3).matrix() - DensityMatrix::pure(ket("du")).matrix()), 1e-15);
}

TEST(PartialTrace, KeepingEverySiteIsIdentity) {
  std::mt19937_64 rng(11);
  const DensityMatrix rho = test::random_density(8, rng);
  EXPECT_LT(max_abs(partial_trace(rho, {1, 2, 3}, 3).matrix() - rho.matrix()), 1e-15);
}

TEST(PartialTrace, SingleSiteTraceIsScalarTrace) {
  std::mt19937_64 rng(12);
  const DensityMatrix rho = test::random_density(16, rng);
  for (int s = 1; s <= 4; ++s) {
    EXPECT_NEAR(std::abs(partial_trace(rho, {s}, 4).trace() - Complex{1.0}), 0.0, 1e-12);
  }
}

TEST(PartialTrace, ChainingMatchesDirect) {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 5; ++trial) {
    const DensityMatrix rho = test::random_density(16, rng);
    const DensityMatrix direct = partial_trace(rho, {2, 4}, 4);
    const DensityMatrix step = partial_trace(partial_trace(rho, {1, 2, 4}, 4), {2, 3}, 3);
    EXPECT_LT(max_abs(direct.matrix() - step.matrix()), 1e-12);
    const DensityMatrix single = partial_trace(partial_trace(rho, {2, 3}, 4), {1}, 2);
    EXPECT_LT(max_abs(single.matrix() - partial_trace(rho, {2}, 4).matrix()), 1e-12);
  }
}

TEST(PartialTrace, Errors) {
  const DensityMatrix rho = DensityMatrix::maximally_mixed(4);
  EXPECT_THROW(partial_trace(rho, {}, 2), std::invalid_argument);
  EXPECT_THROW(partial_trace(rho, {3}, 2), std::out_of_range);
  EXPECT_THROW(partial_trace(rho, {1, 1}, 2), std::invalid_argument);
  EXPECT_THROW(partial_trace(rho, {1}, 3), std::invalid_argument);
}

TEST(PartialTranspose, MaximallyMixedFixed) {
  const Matrix m = Matrix::Identity(4, 4) / 4.0;
  EXPECT_EQ(max_abs(partial_transpose(m) - m), 0.0);
}

TEST(PartialTranspose, BellSpectrum) {
  const RealVector ev = eig_hermitian(partial_transpose(DensityMatrix::pure(test::bell_plus()))).values;
  EXPECT_NEAR(ev(0), -0.5, 1e-14);
  for (int k = 1; k < 4; ++k) EXPECT_NEAR(ev(k), 0.5, 1e-14);
}

TEST(PartialTranspose, InvolutionHermitianTracePreserving) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = test::random_density(4, rng);
    const Operator pt = partial_transpose(rho);
    EXPECT_EQ(max_abs(partial_transpose(pt) - rho.matrix()), 0.0);
    EXPECT_LT(hermiticity_error(pt), 1e-15);
    EXPECT_LT(std::abs(pt.trace() - rho.trace()), 1e-15);
  }
}

TEST(PartialTranspose, RejectsWrongDimension) {
  EXPECT_THROW(partial_transpose(Matrix::Identity(8, 8)), std::invalid_argument);
}

TEST(EigHermitian, Examples) {
  const RealVector z = eig_hermitian(pauli::z()).values;
  EXPECT_DOUBLE_EQ(z(0), -1.0);
  EXPECT_DOUBLE_EQ(z(1), 1.0);
  const RealVector id = eig_hermitian(Operator::Identity(4, 4)).values;
  for (int k = 0; k < 4; ++k) EXPECT_DOUBLE_EQ(id(k), 1.0);
}

TEST(EigHermitian, RejectsNonHermitian) {
  EXPECT_THROW(eig_hermitian(pauli::plus()), std::invalid_argument);
  Operator slightly = pauli::x();
  slightly(0, 1) += 1e-10;
  EXPECT_NO_THROW(eig_hermitian(slightly));
}

TEST(EigHermitian, ReconstructsInput) {
  std::mt19937_64 rng(5);
  const Matrix g = test::random_matrix(6, rng);
  const Operator h = g + g.adjoint();
  const HermitianSpectrum s = eig_hermitian(h);
  EXPECT_LT(max_abs(s.vectors * s.values.cast<Complex>().asDiagonal() * s.vectors.adjoint() - h), 1e-12);
}

TEST(Diagnostics, ValidStates) {
  std::mt19937_64 rng(9);
  EXPECT_TRUE(diagnose(test::random_density(8, rng)).valid());
  EXPECT_TRUE(diagnose(DensityMatrix::pure(test::bell_plus())).valid());
  EXPECT_FALSE(diagnose(DensityMatrix(Matrix::Identity(2, 2))).valid());
}

TEST(TraceDistance, OrthogonalPureStates) {
  EXPECT_NEAR(trace_distance(DensityMatrix::pure(ket("u")), DensityMatrix::pure(ket("d"))), 1.0, 1e-14);
  EXPECT_NEAR(trace_distance(DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(2)), 0.0, 1e-15);
}

}  // namespace
}  // namespace qchain
