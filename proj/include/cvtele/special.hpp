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

#ifndef CVTELE_SPECIAL_HPP
#define CVTELE_SPECIAL_HPP

#include <cstdint>

namespace cvtele::special {

// Saddle-point binomial evaluation (C. Loader, "Fast and Accurate
// Computation of Binomial Probabilities", 2000). All routines stay in log
// space so that the probabilities of very large trials never overflow.

/// log(n!) - log(sqrt(2 pi n) (n/e)^n), the Stirling remainder.
double stirling_error(std::uint64_t n);

/// Deviance term x log(x/np) + np - x, evaluated without cancellation.
double binomial_deviance(double x, double np);

/// log P(X = x) for X ~ Binomial(n, p). Returns -inf for impossible outcomes.
double log_binomial_pmf(std::uint64_t x, std::uint64_t n, double p);

/// P(X = x) for X ~ Binomial(n, p).
double binomial_pmf(std::uint64_t x, std::uint64_t n, double p);

/// log(n!).
double log_factorial(std::uint64_t n);

}  // namespace cvtele::special

#endif  // CVTELE_SPECIAL_HPP
