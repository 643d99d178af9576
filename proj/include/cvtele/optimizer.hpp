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

#ifndef CVTELE_OPTIMIZER_HPP
#define CVTELE_OPTIMIZER_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvtele/fock.hpp"

namespace cvtele::optimizer {

struct EigenSystem {
  RealVector values;   // descending
  RealMatrix vectors;  // column k pairs with values(k)
};

/// Full spectral decomposition of a dense symmetric matrix. Rejects inputs
/// whose asymmetry exceeds 1e-12 and reports solver failure as
/// ConvergenceError.
EigenSystem symmetric_eigensystem(const RealMatrix& m);

/// Which photon-number operator the Lagrange multiplier prices.
enum class Constraint {
  kAverage,  // (n_A + n_B) / 2, weight j + d/2
  kModeA,    // n_A, weight j
};

std::string constraint_name(Constraint c);
/// Accepts "n_av" and "n_a".
Constraint parse_constraint(const std::string& name);

/// (G)_{j,l} = f^(d)_{j,l} - lambda w_j delta_{j,l}. Throws for lambda < 0.
RealMatrix build_g_lambda(double lambda, std::size_t d, std::size_t n_trunc,
                          Constraint constraint = Constraint::kAverage);

/// One solved point of the energy-constrained optimisation.
struct FrontierPoint {
  double lambda = 0.0;
  std::size_t d = 0;
  Constraint constraint = Constraint::kAverage;
  double n_av = 0.0;
  double n_a = 0.0;
  double fidelity = 0.0;
  double g_max = 0.0;
  PnesState state{0, CoeffVector::Ones(1)};

  /// g_max - g_second. Below kDegeneracyGap the frontier may jump here.
  double gap = 0.0;
  /// n_av of the runner-up eigenvector, reported when the gap is tiny.
  std::optional<double> rival_n_av;
  /// |c_{n_trunc}|^2 of the optimal vector.
  double tail_mass = 0.0;
  /// Set when an energy search could not meet its tolerance because n(lambda)
  /// is non-monotone or jumps across the target; the closest point is kept.
  bool non_monotone = false;

  /// Energy priced by the multiplier (n_av or n_A).
  double constrained_energy() const { return constraint == Constraint::kAverage ? n_av : n_a; }
  bool degenerate() const;
  /// True for lambda = 0 and whenever the tail weight reaches 1e-12.
  bool truncation_limited() const;
};

inline constexpr double kDegeneracyGap = 1e-10;
inline constexpr double kFrontierTailTolerance = 1e-12;

/// Solver for one (d, n_trunc, constraint) triple. Holds the fidelity block
/// so that repeated lambda solves do not rebuild it; immutable and safe to
/// share across threads.
class LagrangianSolver {
 public:
  LagrangianSolver(std::size_t d, std::size_t n_trunc, Constraint constraint = Constraint::kAverage);

  std::size_t d() const noexcept { return block_.d; }
  std::size_t n_trunc() const noexcept { return block_.n_trunc(); }
  Constraint constraint() const noexcept { return constraint_; }
  const FidelityBlock& block() const noexcept { return block_; }

  /// Top eigenpair of G_lambda packaged as a FrontierPoint; the eigenvector
  /// is sign-fixed so that its first nonzero component is positive.
  FrontierPoint solve(double lambda) const;

  /// Bisection in log(lambda) until |energy - target| <= tol, with the energy
  /// measured by the solver's constraint. Throws BracketError when no
  /// multiplier reaches the target at this cutoff.
  FrontierPoint at_energy(double target, double tol = 1e-10) const;

 private:
  FidelityBlock block_;
  Constraint constraint_;
};

FrontierPoint optimal_state_for_lambda(double lambda, std::size_t d, std::size_t n_trunc,
                                       Constraint constraint = Constraint::kAverage);

/// `steps` points spaced logarithmically from lambda_max down to lambda_min.
std::vector<double> log_lambda_grid(double lambda_min, double lambda_max, std::size_t steps);

/// One point per multiplier, sorted by n_av (ties broken by descending
/// lambda). The result does not depend on `threads`.
std::vector<FrontierPoint> frontier(std::span<const double> lambda_grid, std::size_t d,
                                    std::size_t n_trunc,
                                    Constraint constraint = Constraint::kAverage,
                                    unsigned threads = 1);

FrontierPoint optimal_fidelity_at_energy(double target, std::size_t d, std::size_t n_trunc,
                                         double tol = 1e-10,
                                         Constraint constraint = Constraint::kAverage);

}  // namespace cvtele::optimizer

#endif  // CVTELE_OPTIMIZER_HPP
