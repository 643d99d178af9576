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

#include "cvtele/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cvtele/gaussian.hpp"
#include "cvtele/optimizer.hpp"
#include "cvtele/parallel.hpp"
#include "cvtele/special.hpp"
#include "cvtele/states.hpp"

namespace cvtele::loss {

namespace {

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("transmittance eta must lie in [0, 1]");
}

// Binomial(n, 1 - eta) probabilities of losing k photons out of n, with
// upper-tail sums so that discarded weights never suffer cancellation.
class LossTable {
 public:
  LossTable(std::size_t max_n, double eta) : pmf_(size(max_n)), tail_(size(max_n)) {
    for (std::size_t n = 0; n <= max_n; ++n) {
      double acc = 0.0;
      for (std::size_t k = n + 1; k-- > 0;) {
        tail_[index(n, k)] = acc;  // P(K > k)
        const double p = std::exp(special::log_binomial_pmf(k, n, 1.0 - eta));
        pmf_[index(n, k)] = p;
        acc += p;
      }
    }
  }

  double amplitude(std::size_t n, std::size_t k) const {
    return k > n ? 0.0 : std::sqrt(pmf_[index(n, k)]);
  }
  double tail(std::size_t n, std::size_t k) const { return k >= n ? 0.0 : tail_[index(n, k)]; }

 private:
  static std::size_t size(std::size_t max_n) { return (max_n + 1) * (max_n + 2) / 2; }
  static std::size_t index(std::size_t n, std::size_t k) { return n * (n + 1) / 2 + k; }

  std::vector<double> pmf_;
  std::vector<double> tail_;
};

// Weight left out when at most k photons are lost per mode.
double discarded_weight(const std::vector<double>& probs, std::size_t offset, std::size_t k,
                        const LossTable& table) {
  double out = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    if (probs[j] == 0.0) continue;
    const double ta = table.tail(j, k);
    const double tb = table.tail(j + offset, k);
    out += probs[j] * (ta + tb - ta * tb);
  }
  return out;
}

}  // namespace

double kraus_amplitude(std::size_t n, std::size_t k, double eta) {
  check_eta(eta);
  if (k > n) return 0.0;
  return std::exp(0.5 * special::log_binomial_pmf(k, n, 1.0 - eta));
}

LossResult apply_symmetric_loss(const PnesState& state, double eta, const LossOptions& options) {
  check_eta(eta);
  const std::size_t d = state.offset();
  const std::size_t n = state.n_trunc();
  const auto& c = state.coeffs();
  std::vector<double> probs(n + 1);
  for (std::size_t j = 0; j <= n; ++j) probs[j] = std::norm(c(static_cast<Eigen::Index>(j)));

  const LossTable table(n + d, eta);
  LossResult result;
  if (options.k_max) {
    result.k_max = *options.k_max;
    result.discarded_weight = discarded_weight(probs, d, result.k_max, table);
  } else {
    // Nothing beyond n + d photons can be lost.
    const std::size_t cap = std::min(options.k_cap, n + d);
    std::size_t k = 0;
    for (;; ++k) {
      result.discarded_weight = discarded_weight(probs, d, k, table);
      if (result.discarded_weight < options.residual_tolerance || k >= cap) break;
    }
    result.k_max = k;
  }
  if (!(result.discarded_weight < options.residual_tolerance)) {
    throw TruncationError("apply_symmetric_loss: k_max=" + std::to_string(result.k_max) +
                          " leaves weight " + std::to_string(result.discarded_weight) +
                          " out (tolerance " + std::to_string(options.residual_tolerance) + ")");
  }

  const std::size_t k_max = result.k_max;
  for (std::size_t ka = 0; ka <= k_max; ++ka) {
    for (std::size_t kb = 0; kb <= k_max; ++kb) {
      // |j, j+d> -> |j - ka, j + d - kb>, difference B - A = d + ka - kb.
      const bool swapped = d + ka < kb;
      const std::size_t j_min = std::max(ka, kb > d ? kb - d : 0);
      if (j_min > n) continue;
      const std::size_t out_d = swapped ? kb - d - ka : d + ka - kb;
      const std::size_t shift = swapped ? kb - d : ka;  // output index i = j - shift
      CoeffVector v = CoeffVector::Zero(static_cast<Eigen::Index>(n - shift + 1));
      for (std::size_t j = j_min; j <= n; ++j) {
        const double a = table.amplitude(j, ka) * table.amplitude(j + d, kb);
        if (a != 0.0) v(static_cast<Eigen::Index>(j - shift)) = c(static_cast<Eigen::Index>(j)) * a;
      }
      const double w = v.squaredNorm();
      if (!(w > 1e-300)) continue;
      result.branches.push_back({ka, kb, w, swapped, PnesState::normalized(out_d, std::move(v))});
    }
  }
  return result;
}

ModeEnergy mixture_mean_photon(const LossResult& result) {
  ModeEnergy e;
  for (const auto& b : result.branches) {
    const auto& c = b.state.coeffs();
    double low = 0.0;
    for (Eigen::Index i = 0; i < c.size(); ++i) low += static_cast<double>(i) * std::norm(c(i));
    const double high = low + static_cast<double>(b.state.offset());
    e.n_a += b.weight * (b.swapped ? high : low);
    e.n_b += b.weight * (b.swapped ? low : high);
  }
  return e;
}

LossEvaluator::LossEvaluator(std::size_t max_photons, LossOptions options)
    : options_(std::move(options)),
      cache_(std::make_shared<const FidelityOperator>(
          max_photons + std::max(options_.k_cap, options_.k_max.value_or(0)), max_photons)) {}

double LossEvaluator::fidelity(const PnesState& state, double eta) const {
  const LossResult result = apply_symmetric_loss(state, eta, options_);
  return fidelity_mixture(result.branches, cache_.get());
}

double fidelity_after_loss(const PnesState& state, double eta, const LossOptions& options) {
  const LossResult result = apply_symmetric_loss(state, eta, options);
  std::size_t max_d = 0;
  for (const auto& b : result.branches) max_d = std::max(max_d, b.state.offset());
  const FidelityOperator cache(max_d, state.n_trunc() + state.offset());
  return fidelity_mixture(result.branches, &cache);
}

std::vector<DeltaRow> delta_curve(const PnesState& candidate, const PnesState& reference,
                                  std::span<const double> eta_grid, const LossOptions& options,
                                  unsigned threads) {
  for (double eta : eta_grid) check_eta(eta);
  const std::size_t max_photons = std::max(candidate.n_trunc() + candidate.offset(),
                                           reference.n_trunc() + reference.offset());
  const LossEvaluator evaluator(max_photons, options);
  return parallel_map(eta_grid.size(), threads, [&](std::size_t i) {
    DeltaRow row;
    row.eta = eta_grid[i];
    row.f_candidate = evaluator.fidelity(candidate, row.eta);
    row.f_reference = evaluator.fidelity(reference, row.eta);
    row.delta = row.f_candidate - row.f_reference;
    return row;
  });
}

std::vector<DeltaRow> delta_F_curve(double nbar, std::span<const double> eta_grid,
                                    std::size_t n_trunc, const LossOptions& options,
                                    unsigned threads) {
  const auto optimal = optimizer::optimal_fidelity_at_energy(nbar, 0, n_trunc);
  const auto tmsv = states::tmsv(gaussian::energy_to_squeezing(nbar), n_trunc);
  return delta_curve(optimal.state, tmsv, eta_grid, options, threads);
}

Crossover crossover_transmittance(const PnesState& candidate, const PnesState& reference,
                                  double tol, const LossOptions& options, double eta_min,
                                  double coarse_step) {
  if (!(tol > 0.0)) throw std::invalid_argument("crossover_transmittance: tol must be > 0");
  if (!(coarse_step > 0.0) || !(eta_min >= 0.0 && eta_min < 1.0)) {
    throw std::invalid_argument("crossover_transmittance: need coarse_step > 0 and 0 <= eta_min < 1");
  }
  const std::size_t max_photons = std::max(candidate.n_trunc() + candidate.offset(),
                                           reference.n_trunc() + reference.offset());
  const LossEvaluator evaluator(max_photons, options);
  const auto delta = [&](double eta) {
    return evaluator.fidelity(candidate, eta) - evaluator.fidelity(reference, eta);
  };

  Crossover out;
  out.delta_at_unity = delta(1.0);
  if (!(out.delta_at_unity > 0.0)) {
    out.note = "no advantage at eta = 1";
    return out;
  }
  double above = 1.0;
  double below = -1.0;
  const int steps = static_cast<int>(std::floor((1.0 - eta_min) / coarse_step + 1e-9));
  for (int i = 1; i <= steps; ++i) {
    const double eta = 1.0 - coarse_step * i;
    if (delta(eta) <= 0.0) {
      below = eta;
      break;
    }
    above = eta;
  }
  if (below < 0.0) {
    out.note = "no crossover above eta_min = " + std::to_string(eta_min);
    return out;
  }
  while (above - below > tol) {
    const double mid = 0.5 * (above + below);
    if (delta(mid) > 0.0) {
      above = mid;
    } else {
      below = mid;
    }
  }
  out.eta_star = 0.5 * (above + below);
  return out;
}

Crossover crossover_transmittance(double nbar, double tol, std::size_t n_trunc,
                                  const LossOptions& options) {
  const auto optimal = optimizer::optimal_fidelity_at_energy(nbar, 0, n_trunc);
  const auto tmsv = states::tmsv(gaussian::energy_to_squeezing(nbar), n_trunc);
  return crossover_transmittance(optimal.state, tmsv, tol, options);
}

}  // namespace cvtele::loss
