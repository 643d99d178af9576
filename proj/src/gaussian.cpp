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

#include "cvtele/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace cvtele::gaussian {

namespace {

void check_squeezing(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("squeezing r must be >= 0");
}

}  // namespace

GaussianParams GaussianParams::tmsv(double r, double eta) {
  check_squeezing(r);
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  const double v = 0.5 * (eta * std::exp(-2.0 * r) + (1.0 - eta));
  return {r, eta, v, v};
}

double tmsv_fidelity(double r) {
  check_squeezing(r);
  return 1.0 / (1.0 + std::exp(-2.0 * r));
}

double energy_to_squeezing(double nbar) {
  if (!(nbar >= 0.0)) throw std::invalid_argument("mean photon number must be >= 0");
  return std::asinh(std::sqrt(nbar));
}

double squeezing_to_energy(double r) {
  check_squeezing(r);
  const double s = std::sinh(r);
  return s * s;
}

double tmsv_energy_for_fidelity(double f) {
  if (!(f >= kClassicalBound && f < 1.0)) {
    throw std::domain_error("tmsv_energy_for_fidelity: fidelity must lie in [0.5, 1)");
  }
  return squeezing_to_energy(-0.5 * std::log(1.0 / f - 1.0));
}

double gaussian_fidelity(const GaussianParams& params) {
  if (!(params.var_u > 0.0) || !(params.var_v > 0.0)) {
    throw std::invalid_argument("gaussian_fidelity: variances must be positive");
  }
  return 1.0 / std::sqrt((1.0 + 2.0 * params.var_u) * (1.0 + 2.0 * params.var_v));
}

double lossy_tmsv_fidelity(double r, double eta) {
  check_squeezing(r);
  return 1.0 / (2.0 - eta + eta * std::exp(-2.0 * r));
}

SymplecticBound tmsv_symplectic_nu(double r) {
  check_squeezing(r);
  const double nu = std::exp(-2.0 * r);
  return {nu, 1.0 / (1.0 + nu)};
}

}  // namespace cvtele::gaussian
