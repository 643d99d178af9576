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

#ifndef CVTELE_STATES_HPP
#define CVTELE_STATES_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvtele/fock.hpp"

namespace cvtele::states {

enum class Family { kTmsv, kTmc, kPssv, kRaw };

/// A named resource-state family. `parameter` is the squeezing r for TMSV
/// and the amplitude x for TMC and PSSV; it is ignored for RAW.
struct StateFamily {
  Family tag = Family::kTmsv;
  double parameter = 0.0;
};

std::string_view family_name(Family f);
/// Accepts "tmsv", "tmc", "pssv", "raw". Throws std::invalid_argument otherwise.
Family parse_family(std::string_view name);

/// Constructors reject a cutoff whose last normalized weight |c_N|^2 is not
/// below this bound.
inline constexpr double kTailTolerance = 1e-12;

/// Two-mode squeezed vacuum, c_j = tanh^j(r) / cosh(r).
PnesState tmsv(double r, std::size_t n_trunc);

/// Two-mode coherently correlated state, c_j proportional to x^j / j!.
PnesState tmc(double x, std::size_t n_trunc);

/// Photon-subtracted squeezed vacuum, c_j proportional to (j+1) x^{j+1}.
/// The overall x cancels under normalisation; 0 < x < 1.
PnesState pssv(double x, std::size_t n_trunc);

/// Arbitrary coefficients, renormalised.
PnesState raw(std::size_t d, CoeffVector coeffs);

/// Dispatches on the tag; RAW is rejected (it carries no parameter).
PnesState make(const StateFamily& family, std::size_t n_trunc);

struct MeanPhoton {
  double n_a = 0.0;
  double n_b = 0.0;
  double n_av = 0.0;
};

MeanPhoton mean_photon(const PnesState& state);

/// P_j = |c_j|^2, the Schmidt spectrum and mode A's photon statistics.
std::vector<double> photon_distribution(const PnesState& state);

/// Mandel Q of mode A. For d = 0 both marginals coincide.
/// Throws std::domain_error when the mean photon number is zero.
double mandel_q(const PnesState& state);
double mandel_q(std::span<const double> distribution);

/// Von Neumann entropy of either reduced state, in nats.
double entanglement_entropy(const PnesState& state);

/// Bisection on the family parameter until |n_av - target| <= tol.
/// Throws BracketError when the target cannot be reached at this cutoff.
double solve_parameter_for_energy(Family family, double target, double tol = 1e-10,
                                  std::size_t n_trunc = 100);

}  // namespace cvtele::states

#endif  // CVTELE_STATES_HPP
