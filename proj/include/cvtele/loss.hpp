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

#ifndef CVTELE_LOSS_HPP
#define CVTELE_LOSS_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvtele/fock.hpp"

namespace cvtele::loss {

/// sqrt(C(n,k) eta^{n-k} (1-eta)^k), zero for k > n. Throws for eta outside [0, 1].
double kraus_amplitude(std::size_t n, std::size_t k, double eta);

/// One Kraus component of a state after identical pure loss on both modes.
/// `state` lives in sector |lost_a - lost_b - d_in| after the mode swap that
/// keeps the offset non-negative; `swapped` records that swap.
struct LossBranch {
  std::size_t lost_a = 0;
  std::size_t lost_b = 0;
  double weight = 0.0;
  bool swapped = false;
  PnesState state{0, CoeffVector::Ones(1)};
};

struct LossOptions {
  /// Fixed number of lost photons per mode; adaptive when empty.
  std::optional<std::size_t> k_max;
  /// Largest weight the branch list may leave out.
  double residual_tolerance = 1e-10;
  /// Upper limit for the adaptive search.
  std::size_t k_cap = 60;
};

struct LossResult {
  std::vector<LossBranch> branches;  // ordered by (lost_a, lost_b)
  std::size_t k_max = 0;
  double discarded_weight = 0.0;
};

/// Throws TruncationError when k_max (given or capped) leaves more than
/// residual_tolerance of the weight out.
LossResult apply_symmetric_loss(const PnesState& state, double eta, const LossOptions& options = {});

struct ModeEnergy {
  double n_a = 0.0;
  double n_b = 0.0;
};

/// Mean photon numbers of the lossy mixture in the original mode labels.
ModeEnergy mixture_mean_photon(const LossResult& result);

/// Reuses one block cache across many states and transmittances.
class LossEvaluator {
 public:
  /// Covers input states with n_trunc + offset <= max_photons.
  explicit LossEvaluator(std::size_t max_photons, LossOptions options = {});

  double fidelity(const PnesState& state, double eta) const;
  const LossOptions& options() const noexcept { return options_; }

 private:
  LossOptions options_;
  std::shared_ptr<const FidelityOperator> cache_;
};

double fidelity_after_loss(const PnesState& state, double eta, const LossOptions& options = {});

struct DeltaRow {
  double eta = 1.0;
  double f_candidate = 0.0;
  double f_reference = 0.0;
  double delta = 0.0;
};

/// F(candidate) - F(reference) after identical loss, one row per grid value.
std::vector<DeltaRow> delta_curve(const PnesState& candidate, const PnesState& reference,
                                  std::span<const double> eta_grid,
                                  const LossOptions& options = {}, unsigned threads = 1);

/// Energy-matched optimal PNES against the TMSV at mean photon number nbar.
std::vector<DeltaRow> delta_F_curve(double nbar, std::span<const double> eta_grid,
                                    std::size_t n_trunc = 100, const LossOptions& options = {},
                                    unsigned threads = 1);

struct Crossover {
  std::optional<double> eta_star;
  double delta_at_unity = 0.0;
  std::string note;
};

/// Largest eta below one where delta changes sign. A coarse grid descending
/// from one locates the first non-positive delta, then bisection refines it.
Crossover crossover_transmittance(const PnesState& candidate, const PnesState& reference,
                                  double tol = 1e-4, const LossOptions& options = {},
                                  double eta_min = 0.05, double coarse_step = 0.05);

Crossover crossover_transmittance(double nbar, double tol = 1e-4, std::size_t n_trunc = 100,
                                  const LossOptions& options = {});

}  // namespace cvtele::loss

#endif  // CVTELE_LOSS_HPP
