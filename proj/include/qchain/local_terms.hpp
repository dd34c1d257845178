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

// Symbolic sums of products of single-site operators. Every product of
// sigma^+, sigma^-, sigma^z and n maps a basis state to at most one basis
// state, so a sum can be materialized densely, restricted to an excitation
// sector without ever forming the full space, or applied to basis vectors.

#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qchain/operator_core.hpp"

namespace qchain {

enum class LocalOp { Plus, Minus, Z, Number };

struct SiteFactor {
  int site;  // 1-based
  LocalOp op;
};

// coefficient * factors[0] * factors[1] * ... (leftmost factor acts last)
struct ProductTerm {
  Complex coefficient{1.0};
  std::vector<SiteFactor> factors;

  // Image of basis state x: (y, amplitude) or nothing when annihilated.
  [[nodiscard]] std::optional<std::pair<BasisIndex, Complex>> act(BasisIndex x, int n) const {
    Complex amp = coefficient;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
      const BasisIndex bit = site_bit(it->site, n);
      const bool up = (x & bit) != 0;
      switch (it->op) {
        case LocalOp::Plus:
          if (up) return std::nullopt;
          x |= bit;
          break;
        case LocalOp::Minus:
          if (!up) return std::nullopt;
          x &= ~bit;
          break;
        case LocalOp::Z:
          if (!up) amp = -amp;
          break;
        case LocalOp::Number:
          if (!up) return std::nullopt;
          break;
      }
    }
    return std::make_pair(x, amp);
  }

  // Net change in excitation number.
  [[nodiscard]] int excitation_shift() const {
    int s = 0;
    for (const auto& f : factors) {
      if (f.op == LocalOp::Plus) ++s;
      if (f.op == LocalOp::Minus) --s;
    }
    return s;
  }
};

class OperatorSum {
 public:
  explicit OperatorSum(int n) : n_(n) {
    if (n < 1 || n > 62) throw std::invalid_argument("OperatorSum: qubit count out of range");
  }

  OperatorSum& add(Complex coefficient, std::vector<SiteFactor> factors) {
    for (const auto& f : factors) {
      if (f.site < 1 || f.site > n_) {
        throw std::out_of_range("OperatorSum: site " + std::to_string(f.site) + " outside 1.." + std::to_string(n_));
      }
    }
    terms_.push_back({coefficient, std::move(factors)});
    return *this;
  }

  // coefficient * (sigma_i^+ sigma_j^- + sigma_j^+ sigma_i^-)
  OperatorSum& add_hopping(double coefficient, int i, int j) {
    add(coefficient, {{i, LocalOp::Plus}, {j, LocalOp::Minus}});
    add(coefficient, {{j, LocalOp::Plus}, {i, LocalOp::Minus}});
    return *this;
  }

  [[nodiscard]] int qubits() const noexcept { return n_; }
  [[nodiscard]] const std::vector<ProductTerm>& terms() const noexcept { return terms_; }

  [[nodiscard]] bool conserves_excitations() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const ProductTerm& t) { return t.excitation_shift() == 0; });
  }

  [[nodiscard]] Operator dense() const {
    if (n_ > kMaxDenseQubits) throw std::invalid_argument("OperatorSum::dense: too many qubits for a dense operator");
    const Index dim = Index{1} << n_;
    Operator out = Operator::Zero(dim, dim);
    for (BasisIndex x = 0; x < static_cast<BasisIndex>(dim); ++x) {
      for (const auto& t : terms_) {
        if (auto img = t.act(x, n_)) out(static_cast<Index>(img->first), static_cast<Index>(x)) += img->second;
      }
    }
    return out;
  }

  // Matrix elements <basis[r]| O |basis[c]>. Images leaving the span are
  // dropped, so for a non-conserving sum this is the compression P O P.
  [[nodiscard]] Operator restricted(const std::vector<BasisIndex>& sorted_basis) const {
    const auto d = static_cast<Index>(sorted_basis.size());
    Operator out = Operator::Zero(d, d);
    for (Index c = 0; c < d; ++c) {
      for (const auto& t : terms_) {
        auto img = t.act(sorted_basis[static_cast<std::size_t>(c)], n_);
        if (!img) continue;
        auto it = std::lower_bound(sorted_basis.begin(), sorted_basis.end(), img->first);
        if (it == sorted_basis.end() || *it != img->first) continue;
        out(static_cast<Index>(it - sorted_basis.begin()), c) += img->second;
      }
    }
    return out;
  }

 private:
  int n_;
  std::vector<ProductTerm> terms_;
};

}  // namespace qchain
