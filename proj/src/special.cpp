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

#include "cvtele/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace cvtele::special {

namespace {

constexpr long double kLogSqrt2Pi = 0.918938533204672741780329736405617639861L;

}  // namespace

double stirling_error(std::uint64_t n) {
  // The pmf never asks for n = 0; the endpoints take separate branches.
  if (n == 0) return 0.0;
  if (n <= 15) {
    const long double x = static_cast<long double>(n);
    return static_cast<double>(std::lgamma(x + 1.0L) - (x + 0.5L) * std::log(x) + x - kLogSqrt2Pi);
  }
  // Bernoulli series; eight terms keep full relative precision from n = 16.
  constexpr double s[] = {1.0 / 12.0,  -1.0 / 360.0,       1.0 / 1260.0, -1.0 / 1680.0,
                          1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0,  -3617.0 / 122400.0};
  const double x = static_cast<double>(n);
  const double inv2 = 1.0 / (x * x);
  double acc = 0.0;
  for (int k = 7; k >= 0; --k) acc = s[k] + acc * inv2;
  return acc / x;
}

double binomial_deviance(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

double log_binomial_pmf(std::uint64_t x, std::uint64_t n, double p) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (x > n) return kNegInf;
  const double q = 1.0 - p;
  if (p == 0.0) return x == 0 ? 0.0 : kNegInf;
  if (q == 0.0) return x == n ? 0.0 : kNegInf;
  const double nd = static_cast<double>(n);
  if (x == 0) {
    if (n == 0) return 0.0;
    return p < 0.1 ? -binomial_deviance(nd, nd * q) - nd * p : nd * std::log(q);
  }
  if (x == n) {
    return q < 0.1 ? -binomial_deviance(nd, nd * p) - nd * q : nd * std::log(p);
  }
  const double xd = static_cast<double>(x);
  const double lc = stirling_error(n) - stirling_error(x) - stirling_error(n - x) -
                    binomial_deviance(xd, nd * p) - binomial_deviance(nd - xd, nd * q);
  const double lf = std::log(2.0 * std::numbers::pi) + std::log(xd) + std::log1p(-xd / nd);
  return lc - 0.5 * lf;
}

double binomial_pmf(std::uint64_t x, std::uint64_t n, double p) {
  return std::exp(log_binomial_pmf(x, n, p));
}

double log_factorial(std::uint64_t n) {
  return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace cvtele::special
