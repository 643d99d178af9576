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

#ifndef CVTELE_GAUSSIAN_HPP
#define CVTELE_GAUSSIAN_HPP

namespace cvtele::gaussian {

/// Best coherent-state teleportation fidelity without entanglement.
inline constexpr double kClassicalBound = 0.5;
/// Fidelity above which the teleported copy is the best possible one.
inline constexpr double kNoCloningBound = 0.6826;

/// Second moments of the EPR combinations u = (x_A - x_B)/sqrt2 and
/// v = (p_A + p_B)/sqrt2, vacuum variance 1/2. The two are uncorrelated for
/// every state built here.
struct GaussianParams {
  double r = 0.0;
  double eta = 1.0;
  double var_u = 0.5;
  double var_v = 0.5;

  /// TMSV with squeezing r after identical pure loss eta on both modes:
  /// V = eta e^{-2r}/2 + (1 - eta)/2.
  static GaussianParams tmsv(double r, double eta = 1.0);
};

/// F = 1 / (1 + e^{-2r}).
double tmsv_fidelity(double r);

/// Squeezing with sinh^2 r = nbar.
double energy_to_squeezing(double nbar);

double squeezing_to_energy(double r);

/// TMSV mean photon number reaching fidelity f, i.e. sinh^2 r with
/// e^{-2r} = 1/f - 1. Throws std::domain_error unless 0.5 <= f < 1.
double tmsv_energy_for_fidelity(double f);

/// F = [(1 + 2 V_u)(1 + 2 V_v)]^{-1/2}. Throws std::invalid_argument for
/// a non-positive variance.
double gaussian_fidelity(const GaussianParams& params);

/// 1 / (2 - eta + eta e^{-2r}), the lossy TMSV fidelity in closed form.
double lossy_tmsv_fidelity(double r, double eta);

struct SymplecticBound {
  double nu = 1.0;
  double fidelity_bound = 0.5;
};

/// Lowest symplectic eigenvalue of the partially transposed TMSV, nu = e^{-2r},
/// and the bound 1 / (1 + nu) that the TMSV saturates.
SymplecticBound tmsv_symplectic_nu(double r);

}  // namespace cvtele::gaussian

#endif  // CVTELE_GAUSSIAN_HPP
