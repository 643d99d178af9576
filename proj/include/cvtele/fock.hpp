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

#ifndef CVTELE_FOCK_HPP
#define CVTELE_FOCK_HPP

#include <cstddef>
#include <complex>
#include <concepts>
#include <ranges>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cvtele/errors.hpp"

namespace cvtele {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using CoeffVector = Eigen::VectorXcd;

/// Largest Fock index accepted by the element routines.
inline constexpr std::size_t kMaxFockIndex = 10000;
/// Largest cutoff for which a dense block is materialised.
inline constexpr std::size_t kMaxBlockTrunc = 4096;
/// Accepted deviation of an input state's squared norm from one.
inline constexpr double kInputNormTolerance = 1e-9;

/// A two-mode state sum_j c_j |j, j + d> confined to one photon-number
/// difference sector. Mode B always carries at least as many photons as
/// mode A; callers holding a state with more photons on A swap the modes
/// first (the fidelity and the energy are invariant under the swap).
class PnesState {
 public:
  /// Throws NormalizationError when |sum |c_j|^2 - 1| > kInputNormTolerance.
  PnesState(std::size_t offset, CoeffVector coeffs);

  /// Rescales coeffs to unit norm. Throws std::invalid_argument for a zero vector.
  static PnesState normalized(std::size_t offset, CoeffVector coeffs);

  std::size_t offset() const noexcept { return offset_; }
  std::size_t n_trunc() const noexcept { return static_cast<std::size_t>(coeffs_.size()) - 1; }
  const CoeffVector& coeffs() const noexcept { return coeffs_; }
  double norm_squared() const noexcept { return coeffs_.squaredNorm(); }

 private:
  std::size_t offset_;
  CoeffVector coeffs_;
};

/// Dense matrix of f^(d)_{j,l} for 0 <= j, l <= n_trunc.
struct FidelityBlock {
  std::size_t d = 0;
  RealMatrix entries;

  std::size_t n_trunc() const noexcept { return static_cast<std::size_t>(entries.rows()) - 1; }
};

/// <j, j+d| F |l, l+d> = (j+l+d)! / (2^{j+l+d+1} sqrt(j! (j+d)! l! (l+d)!)).
///
/// Evaluated as sqrt(B(j) B(l)) / 2 with B the Binomial(j+l+d, 1/2) pmf,
/// which keeps every intermediate in log space. Indices above `cap` are
/// rejected with std::out_of_range.
double fidelity_element(std::size_t j, std::size_t l, std::size_t d,
                        std::size_t cap = kMaxFockIndex);

/// Throws std::length_error when n_trunc exceeds kMaxBlockTrunc.
FidelityBlock build_block(std::size_t d, std::size_t n_trunc);

/// Re(c^H M c) over the leading c.size() x c.size() corner of `m`.
double quadratic_form(const RealMatrix& m, const CoeffVector& c);

/// Fidelity of a pure fixed-sector resource state.
double fidelity_pure(const PnesState& state);

/// Same, reusing a prebuilt block of matching sector and sufficient size.
double fidelity_pure(const PnesState& state, const FidelityBlock& block);

/// Immutable cache of blocks for sectors 0..max_d, all at one cutoff.
/// Build once and share freely between threads.
class FidelityOperator {
 public:
  FidelityOperator(std::size_t max_d, std::size_t n_trunc);

  std::size_t max_d() const noexcept { return blocks_.size() - 1; }
  std::size_t n_trunc() const noexcept { return n_trunc_; }
  const FidelityBlock& block(std::size_t d) const { return blocks_.at(d); }

  /// Falls back to an on-the-fly block when the state does not fit the cache.
  double expectation(const PnesState& state) const;

 private:
  std::size_t n_trunc_;
  std::vector<FidelityBlock> blocks_;
};

template <typename T>
concept WeightedPnes = requires(const T& t) {
  { t.weight } -> std::convertible_to<double>;
  { t.state } -> std::convertible_to<const PnesState&>;
};

struct MixtureComponent {
  double weight = 0.0;
  PnesState state;
};

namespace detail {
void check_mixture_weight(double weight);
void check_mixture_total(double total);
}  // namespace detail

/// sum_b w_b F(state_b) for a sector-diagonal mixture. The weights may be
/// an unnormalised Kraus decomposition but must not sum above one.
template <typename Range>
  requires WeightedPnes<std::ranges::range_value_t<Range>>
double fidelity_mixture(const Range& components, const FidelityOperator* cache = nullptr) {
  double total = 0.0;
  for (const auto& c : components) {
    detail::check_mixture_weight(c.weight);
    total += c.weight;
  }
  detail::check_mixture_total(total);
  double f = 0.0;
  for (const auto& c : components) {
    if (c.weight == 0.0) continue;
    f += c.weight * (cache ? cache->expectation(c.state) : fidelity_pure(c.state));
  }
  return f;
}

}  // namespace cvtele

#endif  // CVTELE_FOCK_HPP
