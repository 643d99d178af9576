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

#ifndef CVTELE_POSITIVITY_HPP
#define CVTELE_POSITIVITY_HPP

#include <cstddef>
#include <string>

namespace cvtele::optimizer {

/// Smallest eigenvalue of a fidelity-derived matrix, computed in MPFR
/// arithmetic. The spectra of interest reach 1e-100 and below at
/// n_trunc = 100, far under double-precision roundoff, so the value carries
/// a rigorous-style backward-error radius.
struct CertifiedEigenvalue {
  double value = 0.0;         // may underflow to 0 or a subnormal; see `decimal`
  std::string decimal;        // 12 significant digits, exact exponent
  double error_bound = 0.0;   // |lambda_true - value| <= error_bound (first-order)
  unsigned digits = 0;        // working precision actually used
  std::size_t n_trunc = 0;
  bool certified_positive = false;  // value - error_bound > 0, decided in MPFR
};

/// min eig of [f^(0)_{j,l} - f^(d)_{j,l}], 0 <= j, l <= n_trunc. Requires d >= 1.
CertifiedEigenvalue min_eigenvalue_of_difference(std::size_t d, std::size_t n_trunc);

/// min eig of [f^(d)_{j,l}], 0 <= j, l <= n_trunc.
CertifiedEigenvalue min_eigenvalue_of_block(std::size_t d, std::size_t n_trunc);

}  // namespace cvtele::optimizer

#endif  // CVTELE_POSITIVITY_HPP
