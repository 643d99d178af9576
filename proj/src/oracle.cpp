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

#include "cvtele/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace cvtele::oracle {

namespace {

constexpr double kPiMinusQuarter = 0.7511255444649425;  // pi^{-1/4}
constexpr std::size_t kFirstOrder = 64;
constexpr std::size_t kMaxOrder = 1024;
constexpr double kKernelAgreement = 1e-13;

// Normalised Hermite polynomials h_n(x) = H_n(x) / sqrt(2^n n! sqrt(pi)).
void hermite_functions(double x, std::size_t n_max, std::vector<double>& h) {
  h.assign(n_max + 1, 0.0);
  h[0] = kPiMinusQuarter;
  if (n_max >= 1) h[1] = std::numbers::sqrt2 * x * h[0];
  for (std::size_t k = 1; k < n_max; ++k) {
    const double kd = static_cast<double>(k);
    h[k + 1] = std::sqrt(2.0 / (kd + 1.0)) * x * h[k] - std::sqrt(kd / (kd + 1.0)) * h[k - 1];
  }
}

RealMatrix kernel_with_order(std::size_t n_trunc, std::size_t order) {
  const GaussHermiteRule rule = gauss_hermite_rule(order);
  const auto n = static_cast<Eigen::Index>(n_trunc) + 1;
  RealMatrix m = RealMatrix::Zero(n, n);
  std::vector<double> h;
  // <m|e^{-x^2}|n> = int e^{-2x^2} h_m h_n dx; substitute x = y / sqrt2.
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    hermite_functions(rule.nodes[i] / std::numbers::sqrt2, n_trunc, h);
    const double w = rule.weights[i] / std::numbers::sqrt2;
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = a % 2; b <= a; b += 2) m(a, b) += w * h[a] * h[b];
    }
  }
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < a; ++b) m(b, a) = m(a, b);
  }
  return m;
}

}  // namespace

GaussHermiteRule gauss_hermite_rule(std::size_t order) {
  if (order == 0) throw std::invalid_argument("gauss_hermite_rule: order must be >= 1");
  constexpr double kEps = 1e-15;
  constexpr int kMaxNewton = 100;
  const std::size_t n = order;
  const double nd = static_cast<double>(n);
  GaussHermiteRule rule{std::vector<double>(n), std::vector<double>(n)};
  auto& x = rule.nodes;
  auto& w = rule.weights;
  // Golub-Welsch seeds, polished by Newton on the orthonormal recurrence.
  RealVector diag = RealVector::Zero(static_cast<Eigen::Index>(n));
  RealVector sub(static_cast<Eigen::Index>(n > 1 ? n - 1 : 0));
  for (Eigen::Index k = 0; k < sub.size(); ++k) sub(k) = std::sqrt(0.5 * static_cast<double>(k + 1));
  Eigen::SelfAdjointEigenSolver<RealMatrix> tri;
  tri.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const RealVector& seed = tri.eigenvalues();
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = seed(static_cast<Eigen::Index>(n - 1 - i));
    double pp = 0.0;
    for (int it = 0; it < kMaxNewton; ++it) {
      double p1 = kPiMinusQuarter;
      double p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = z * std::sqrt(2.0 / (jd + 1.0)) * p2 - std::sqrt(jd / (jd + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * nd) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= kEps * std::max(1.0, std::abs(z))) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  std::reverse(x.begin(), x.end());
  std::reverse(w.begin(), w.end());
  return rule;
}

QuadratureKernel gauss_kernel_x(std::size_t n_trunc) {
  if (n_trunc > kMaxKernelTrunc) {
    throw std::invalid_argument("gauss_kernel_x: n_trunc " + std::to_string(n_trunc) +
                                " exceeds the test-scale limit " + std::to_string(kMaxKernelTrunc));
  }
  std::size_t order = kFirstOrder;
  RealMatrix previous = kernel_with_order(n_trunc, order);
  while (order < kMaxOrder) {
    order *= 2;
    RealMatrix next = kernel_with_order(n_trunc, order);
    const double diff = (next - previous).cwiseAbs().maxCoeff();
    if (diff <= kKernelAgreement) return {n_trunc, std::move(next), order};
    previous = std::move(next);
  }
  throw ConvergenceError("gauss_kernel_x: node doubling did not settle below 1e-13");
}

QuadratureKernel gauss_kernel_p(std::size_t n_trunc) {
  QuadratureKernel k = gauss_kernel_x(n_trunc);
  for (Eigen::Index a = 0; a < k.entries.rows(); ++a) {
    for (Eigen::Index b = 0; b < k.entries.cols(); ++b) {
      // i^{a-b} is real for even a - b; odd entries vanish by parity.
      const Eigen::Index diff = a > b ? a - b : b - a;
      if (diff % 4 == 2) k.entries(a, b) = -k.entries(a, b);
    }
  }
  return k;
}

double BeamsplitterMatrix::unitarity_residual(std::size_t total) const {
  const RealMatrix& b = blocks.at(total);
  const RealMatrix id = RealMatrix::Identity(b.rows(), b.cols());
  return (b.transpose() * b - id).cwiseAbs().maxCoeff();
}

BeamsplitterMatrix beamsplitter_matrix(std::size_t max_total) {
  using Wide = boost::multiprecision::cpp_bin_float_50;
  using WideMatrix = std::vector<std::vector<Wide>>;
  BeamsplitterMatrix bs;
  bs.blocks.reserve(max_total + 1);
  bs.blocks.push_back(RealMatrix::Ones(1, 1));
  // The recursion amplifies rounding roughly 1.45x per photon; run it wide.
  WideMatrix prev(1, std::vector<Wide>(1, Wide(1)));
  const Wide inv_sqrt2 = 1 / sqrt(Wide(2));
  for (std::size_t total = 1; total <= max_total; ++total) {
    const auto n = static_cast<Eigen::Index>(total);
    WideMatrix next(total + 1, std::vector<Wide>(total + 1, Wide(0)));
    // Column a holds U|a, N-a>; grow it from U|a-1, N-a> with
    // (a_A^dag - a_B^dag)/sqrt2, or from U|0, N-1> with (a_A^dag + a_B^dag)/sqrt2.
    for (Eigen::Index a = 0; a <= n; ++a) {
      const Eigen::Index src = a > 0 ? a - 1 : 0;
      const int sign_b = a > 0 ? -1 : 1;
      const Wide scale = inv_sqrt2 / sqrt(Wide(a > 0 ? a : n));
      for (Eigen::Index p = 0; p < n; ++p) {
        const Wide& u = prev[p][src];
        if (u == 0) continue;
        next[p + 1][a] += scale * sqrt(Wide(p + 1)) * u;
        next[p][a] += sign_b * scale * sqrt(Wide(n - p)) * u;
      }
    }
    RealMatrix block(n + 1, n + 1);
    for (Eigen::Index p = 0; p <= n; ++p) {
      for (Eigen::Index a = 0; a <= n; ++a) block(p, a) = static_cast<double>(next[p][a]);
    }
    bs.blocks.push_back(std::move(block));
    prev = std::move(next);
  }
  return bs;
}

BruteForceFidelity::BruteForceFidelity(std::size_t max_total)
    : x_(gauss_kernel_x(max_total)), p_(gauss_kernel_p(max_total)), bs_(beamsplitter_matrix(max_total)) {}

double BruteForceFidelity::raw_element(std::size_t j, std::size_t k, std::size_t l,
                                       std::size_t m) const {
  const std::size_t out_total = j + k;
  const std::size_t in_total = l + m;
  if (std::max(out_total, in_total) > max_total()) {
    throw std::out_of_range("BruteForceFidelity: photon number exceeds the prepared range");
  }
  const RealMatrix& bo = bs_.blocks[out_total];
  const RealMatrix& bi = bs_.blocks[in_total];
  const auto jo = static_cast<Eigen::Index>(j);
  const auto li = static_cast<Eigen::Index>(l);
  const auto no = static_cast<Eigen::Index>(out_total);
  const auto ni = static_cast<Eigen::Index>(in_total);
  double sum = 0.0;
  for (Eigen::Index a = 0; a <= no; ++a) {
    const double left = bo(jo, a);
    if (left == 0.0) continue;
    for (Eigen::Index b = 0; b <= ni; ++b) {
      sum += left * x_.entries(a, b) * p_.entries(no - a, ni - b) * bi(li, b);
    }
  }
  return sum;
}

double BruteForceFidelity::element(std::size_t j, std::size_t k, std::size_t l, std::size_t m) const {
  if (j + m != k + l) return 0.0;
  return raw_element(j, k, l, m);
}

double bruteforce_element(std::size_t j, std::size_t k, std::size_t l, std::size_t m,
                          std::size_t padding) {
  if (j + m != k + l) return 0.0;
  const std::size_t total = std::max(j + k, l + m);
  const double base = BruteForceFidelity(total).element(j, k, l, m);
  const double padded = BruteForceFidelity(std::min(total + padding, kMaxKernelTrunc)).element(j, k, l, m);
  if (!(std::abs(base - padded) <= 1e-9)) {
    throw ConvergenceError("bruteforce_element: result moved by " + std::to_string(base - padded) +
                           " under kernel growth");
  }
  return padded;
}

std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // out * (n - k + i) / i stays integral at every step.
    const std::uint64_t factor = n - k + i;
    const std::uint64_t g = std::gcd(out, i);
    const std::uint64_t reduced = out / g;
    const std::uint64_t fi = factor / (i / g);
    if (reduced > std::numeric_limits<std::uint64_t>::max() / fi) {
      throw std::overflow_error("binomial_u64: result exceeds 64 bits");
    }
    out = reduced * fi;
  }
  return out;
}

std::uint64_t central_binomial_convolution(unsigned s) {
  std::uint64_t sum = 0;
  for (unsigned t = 0; t <= s; ++t) {
    sum += binomial_u64(2 * t, t) * binomial_u64(2 * (s - t), s - t);
  }
  return sum;
}

std::int64_t alternating_binomial_sum(unsigned s, unsigned t) {
  std::int64_t sum = 0;
  const auto ti = static_cast<std::int64_t>(t);
  for (std::int64_t u = -ti; u <= ti; ++u) {
    const auto term = static_cast<std::int64_t>(binomial_u64(s, static_cast<std::uint64_t>(ti + u)) *
                                                binomial_u64(s, static_cast<std::uint64_t>(ti - u)));
    sum += (u % 2 == 0) ? term : -term;
  }
  return sum;
}

}  // namespace cvtele::oracle
