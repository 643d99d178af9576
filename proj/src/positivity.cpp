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

#include "cvtele/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>

namespace cvtele::optimizer {

namespace {

using Real = boost::multiprecision::mpfr_float;

constexpr unsigned kGuardDigits = 40;
constexpr unsigned kMaxDigits = 4000;
constexpr int kMaxAttempts = 4;

// Boost keeps one process-wide MPFR default precision, so scopes are serialized.
std::mutex& precision_mutex() {
  static std::mutex m;
  return m;
}

class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits)
      : lock_(precision_mutex()), saved_(Real::default_precision()) {
    Real::default_precision(digits);
  }
  ~PrecisionScope() { Real::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  std::lock_guard<std::mutex> lock_;
  unsigned saved_;
};

// Row-major dense symmetric matrix.
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<Real> a;

  explicit DenseMatrix(std::size_t size) : n(size), a(size * size) {}
  Real& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const Real& operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

class ElementTable {
 public:
  explicit ElementTable(std::size_t max_index) : fac_(max_index + 1), sqrt_fac_(max_index + 1) {
    fac_[0] = 1;
    for (std::size_t k = 1; k <= max_index; ++k) fac_[k] = fac_[k - 1] * static_cast<unsigned long>(k);
    for (std::size_t k = 0; k <= max_index; ++k) sqrt_fac_[k] = sqrt(fac_[k]);
  }

  Real element(std::size_t j, std::size_t l, std::size_t d) const {
    const std::size_t s = j + l + d;
    Real denom = sqrt_fac_[j] * sqrt_fac_[j + d];
    denom *= sqrt_fac_[l];
    denom *= sqrt_fac_[l + d];
    Real f = fac_[s] / denom;
    return ldexp(f, -static_cast<int>(s + 1));
  }

 private:
  std::vector<Real> fac_;
  std::vector<Real> sqrt_fac_;
};

// Householder reduction to tridiagonal form; only the diagonal and the
// subdiagonal of the result are read back.
void tridiagonalize(DenseMatrix& m, std::vector<Real>& diag, std::vector<Real>& off) {
  const std::size_t n = m.n;
  std::vector<Real> v(n), p(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t lo = k + 1;
    Real sigma = 0;
    for (std::size_t i = lo; i < n; ++i) sigma += m(i, k) * m(i, k);
    if (sigma == 0) continue;
    const Real x0 = m(lo, k);
    Real alpha = sqrt(sigma);
    if (x0 > 0) alpha = -alpha;
    for (std::size_t i = lo; i < n; ++i) v[i] = m(i, k);
    v[lo] -= alpha;
    const Real vtv = 2 * (sigma - x0 * alpha);
    const Real beta = 2 / vtv;
    for (std::size_t i = lo; i < n; ++i) {
      Real acc = 0;
      for (std::size_t j = lo; j < n; ++j) acc += m(i, j) * v[j];
      p[i] = beta * acc;
    }
    Real vp = 0;
    for (std::size_t i = lo; i < n; ++i) vp += v[i] * p[i];
    const Real kappa = beta * vp / 2;
    for (std::size_t i = lo; i < n; ++i) w[i] = p[i] - kappa * v[i];
    for (std::size_t i = lo; i < n; ++i) {
      for (std::size_t j = lo; j <= i; ++j) {
        m(i, j) -= v[i] * w[j] + w[i] * v[j];
        m(j, i) = m(i, j);
      }
    }
    m(lo, k) = alpha;
    m(k, lo) = alpha;
  }
  diag.resize(n);
  off.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) diag[i] = m(i, i);
  for (std::size_t i = 0; i + 1 < n; ++i) off[i] = m(i + 1, i);
}

// Number of eigenvalues of the tridiagonal matrix strictly below x.
std::size_t sturm_count(const std::vector<Real>& diag, const std::vector<Real>& off_sq,
                        const Real& x, const Real& pivot_floor) {
  std::size_t count = 0;
  Real q = diag[0] - x;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < diag.size(); ++i) {
    if (q == 0) q = pivot_floor;
    q = diag[i] - x - off_sq[i - 1] / q;
    if (q < 0) ++count;
  }
  return count;
}

CertifiedEigenvalue smallest_eigenvalue(
    std::size_t n_trunc, unsigned digits,
    const std::function<Real(const ElementTable&, std::size_t, std::size_t)>& entry,
    std::size_t max_index) {
  PrecisionScope scope(digits);
  const std::size_t n = n_trunc + 1;
  const ElementTable table(max_index);
  DenseMatrix m(n);
  Real frob = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      m(i, j) = entry(table, i, j);
      m(j, i) = m(i, j);
      frob += (i == j ? 1 : 2) * m(i, j) * m(i, j);
    }
  }
  frob = sqrt(frob);

  std::vector<Real> diag, off;
  tridiagonalize(m, diag, off);
  std::vector<Real> off_sq(off.size());
  for (std::size_t i = 0; i < off.size(); ++i) off_sq[i] = off[i] * off[i];

  Real lo = diag[0];
  Real hi = diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    Real radius = 0;
    if (i > 0) radius += abs(off[i - 1]);
    if (i + 1 < n) radius += abs(off[i]);
    lo = std::min<Real>(lo, diag[i] - radius);
    hi = std::max<Real>(hi, diag[i] + radius);
  }
  const Real unit = ldexp(Real(1), -static_cast<int>(boost::multiprecision::detail::digits10_2_2(digits)));
  const Real pivot_floor = unit * (frob + 1);
  lo -= pivot_floor;
  hi += pivot_floor;
  // Bisect for the smallest eigenvalue: count(lo) == 0, count(hi) >= 1.
  const Real rel = ldexp(Real(1), -64);
  for (int it = 0; it < 100000; ++it) {
    const Real mid = (lo + hi) / 2;
    if (mid == lo || mid == hi) break;
    if (sturm_count(diag, off_sq, mid, pivot_floor) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= rel * std::max<Real>(abs(lo), abs(hi))) break;
  }
  const Real value = (lo + hi) / 2;
  // Householder backward error plus bisection slack.
  const Real bound = 10 * Real(static_cast<unsigned long>(n * n)) * unit * frob + (hi - lo);

  CertifiedEigenvalue out;
  out.value = static_cast<double>(value);
  out.decimal = value.str(12, std::ios_base::scientific);
  out.error_bound = static_cast<double>(bound);
  out.digits = digits;
  out.n_trunc = n_trunc;
  out.certified_positive = value > bound;
  return out;
}

CertifiedEigenvalue adaptive(std::size_t d, std::size_t n_trunc, bool difference) {
  const auto entry = [d, difference](const ElementTable& t, std::size_t i, std::size_t j) -> Real {
    if (difference) return t.element(i, j, 0) - t.element(i, j, d);
    return t.element(i, j, d);
  };
  const std::size_t max_index = 2 * n_trunc + d;
  // The smallest eigenvalues fall roughly like 10^{-(n_trunc + d/2)}.
  unsigned digits = static_cast<unsigned>(n_trunc + d / 2) + kGuardDigits;
  CertifiedEigenvalue result;
  for (int attempt = 0; attempt < kMaxAttempts && digits <= kMaxDigits; ++attempt) {
    result = smallest_eigenvalue(n_trunc, digits, entry, max_index);
    if (std::abs(result.value) > 1e6 * result.error_bound) return result;
    digits *= 2;
  }
  return result;
}

}  // namespace

CertifiedEigenvalue min_eigenvalue_of_difference(std::size_t d, std::size_t n_trunc) {
  if (d == 0) throw std::invalid_argument("min_eigenvalue_of_difference: d must be >= 1");
  return adaptive(d, n_trunc, true);
}

CertifiedEigenvalue min_eigenvalue_of_block(std::size_t d, std::size_t n_trunc) {
  return adaptive(d, n_trunc, false);
}

}  // namespace cvtele::optimizer
