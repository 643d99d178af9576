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

#ifndef CVTELE_ORACLE_HPP
#define CVTELE_ORACLE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cvtele/fock.hpp"

// Brute-force reconstruction of the fidelity operator e^{-u^2 - v^2} as a
// 50/50 beamsplitter conjugating single-mode Gaussian kernels. Test support
// only: cost grows like n^4 and the routines are limited to small cutoffs.
namespace cvtele::oracle {

inline constexpr std::size_t kMaxKernelTrunc = 60;

/// Nodes and weights for integrals against e^{-x^2}.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule gauss_hermite_rule(std::size_t order);

/// <m| e^{-x^2} |n> (or e^{-p^2}) for 0 <= m, n <= n_trunc.
struct QuadratureKernel {
  std::size_t n_trunc = 0;
  RealMatrix entries;
  std::size_t nodes_used = 0;
};

/// Gauss-Hermite evaluation starting at 64 nodes and doubling until two
/// successive kernels agree to 1e-13. Throws std::invalid_argument above
/// kMaxKernelTrunc and ConvergenceError when doubling does not settle.
QuadratureKernel gauss_kernel_x(std::size_t n_trunc);

/// The x kernel rotated by a quarter period: element (m, n) times i^{m-n}.
QuadratureKernel gauss_kernel_p(std::size_t n_trunc);

/// The beamsplitter with U a_A U^dag = (a_A - a_B)/sqrt2 and
/// U a_B U^dag = (a_A + a_B)/sqrt2, so that U x_A U^dag = u and U p_B U^dag = v.
/// It conserves the total photon number; blocks[N](p, a) = <p, N-p| U |a, N-a>.
struct BeamsplitterMatrix {
  std::vector<RealMatrix> blocks;

  std::size_t max_total() const noexcept { return blocks.size() - 1; }
  /// max |U^T U - I| over the block with N photons.
  double unitarity_residual(std::size_t total) const;
};

BeamsplitterMatrix beamsplitter_matrix(std::size_t max_total);

/// Evaluates <j,k| U (e^{-x_A^2} (x) e^{-p_B^2}) U^dag |l,m> from kernels
/// and beamsplitter blocks sized for total photon numbers up to max_total.
class BruteForceFidelity {
 public:
  explicit BruteForceFidelity(std::size_t max_total);

  std::size_t max_total() const noexcept { return bs_.max_total(); }

  /// Exactly zero when j + m != k + l.
  double element(std::size_t j, std::size_t k, std::size_t l, std::size_t m) const;
  /// The assembled sum without the selection-rule shortcut.
  double raw_element(std::size_t j, std::size_t k, std::size_t l, std::size_t m) const;

 private:
  QuadratureKernel x_;
  QuadratureKernel p_;
  BeamsplitterMatrix bs_;
};

/// One-off element. Evaluated at two kernel sizes (`padding` apart) that
/// must agree to 1e-9; disagreement raises ConvergenceError.
double bruteforce_element(std::size_t j, std::size_t k, std::size_t l, std::size_t m,
                          std::size_t padding = 10);

/// Exact binomial coefficient; throws std::overflow_error past 64 bits.
std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k);

/// sum_t C(2t, t) C(2s - 2t, s - t), which equals 4^s.
std::uint64_t central_binomial_convolution(unsigned s);

/// sum_{u=-t}^{t} (-1)^u C(s, t+u) C(s, t-u), which equals C(s, t).
std::int64_t alternating_binomial_sum(unsigned s, unsigned t);

}  // namespace cvtele::oracle

#endif  // CVTELE_ORACLE_HPP
