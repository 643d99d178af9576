// Copyright 2026 The cvtele Authors
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

#include "cvtele/fock.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cvtele/special.hpp"

namespace cvtele {

PnesState::PnesState(std::size_t offset, CoeffVector coeffs)
    : offset_(offset), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() == 0) throw std::invalid_argument("PnesState: empty coefficient vector");
  const double norm2 = coeffs_.squaredNorm();
  if (!(std::abs(norm2 - 1.0) <= kInputNormTolerance)) {
    throw NormalizationError("PnesState: squared norm " + std::to_string(norm2) +
                             " deviates from 1 by more than 1e-9");
  }
}

PnesState PnesState::normalized(std::size_t offset, CoeffVector coeffs) {
  const double norm = coeffs.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("PnesState: cannot normalise a zero or non-finite vector");
  }
  coeffs /= norm;
  return PnesState(offset, std::move(coeffs));
}

double fidelity_element(std::size_t j, std::size_t l, std::size_t d, std::size_t cap) {
  if (j > cap || l > cap || d > cap) {
    throw std::out_of_range("fidelity_element: index exceeds cap " + std::to_string(cap));
  }
  if (j == 0 && l == 0) return std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(d + 1, 2000)));
  const std::uint64_t s = j + l + d;
  const double log_f = -std::numbers::ln2 + 0.5 * (special::log_binomial_pmf(j, s, 0.5) +
                                                   special::log_binomial_pmf(l, s, 0.5));
  return std::exp(log_f);
}

FidelityBlock build_block(std::size_t d, std::size_t n_trunc) {
  if (n_trunc > kMaxBlockTrunc) {
    throw std::length_error("build_block: n_trunc " + std::to_string(n_trunc) +
                            " exceeds the dense-block limit " + std::to_string(kMaxBlockTrunc));
  }
  const auto n = static_cast<Eigen::Index>(n_trunc) + 1;
  FidelityBlock block{d, RealMatrix(n, n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l <= j; ++l) {
      const double f = fidelity_element(static_cast<std::size_t>(j), static_cast<std::size_t>(l), d);
      block.entries(j, l) = f;
      block.entries(l, j) = f;
    }
  }
  return block;
}

double quadratic_form(const RealMatrix& m, const CoeffVector& c) {
  const Eigen::Index n = c.size();
  const auto corner = m.topLeftCorner(n, n);
  const RealVector re = c.real();
  double q = re.dot(corner * re);
  const RealVector im = c.imag();
  if (im.squaredNorm() > 0.0) q += im.dot(corner * im);
  return q;
}

double fidelity_pure(const PnesState& state) {
  return quadratic_form(build_block(state.offset(), state.n_trunc()).entries, state.coeffs());
}

double fidelity_pure(const PnesState& state, const FidelityBlock& block) {
  if (block.d != state.offset() || block.n_trunc() < state.n_trunc()) {
    throw std::invalid_argument("fidelity_pure: block does not cover the state's sector and cutoff");
  }
  return quadratic_form(block.entries, state.coeffs());
}

FidelityOperator::FidelityOperator(std::size_t max_d, std::size_t n_trunc) : n_trunc_(n_trunc) {
  blocks_.reserve(max_d + 1);
  for (std::size_t d = 0; d <= max_d; ++d) blocks_.push_back(build_block(d, n_trunc));
}

double FidelityOperator::expectation(const PnesState& state) const {
  if (state.offset() < blocks_.size() && state.n_trunc() <= n_trunc_) {
    return quadratic_form(blocks_[state.offset()].entries, state.coeffs());
  }
  return fidelity_pure(state);
}

namespace detail {

void check_mixture_weight(double weight) {
  if (!(weight >= 0.0)) throw std::invalid_argument("fidelity_mixture: negative or NaN weight");
}

void check_mixture_total(double total) {
  if (total > 1.0 + 1e-9) {
    throw std::invalid_argument("fidelity_mixture: weights sum to " + std::to_string(total) +
                                " > 1");
  }
}

}  // namespace detail

}  // namespace cvtele
