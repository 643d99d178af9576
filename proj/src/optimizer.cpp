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

#include "cvtele/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "cvtele/parallel.hpp"
#include "cvtele/states.hpp"

namespace cvtele::optimizer {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr int kMaxBisection = 200;
constexpr std::size_t kFallbackGrid = 257;

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be a finite value >= 0");
  }
}

double weight_offset(std::size_t d, Constraint c) {
  return c == Constraint::kAverage ? 0.5 * static_cast<double>(d) : 0.0;
}

// Deterministic sign: first component of non-negligible magnitude positive.
void fix_sign(RealVector& v) {
  const double scale = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12 * scale) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

EigenSystem symmetric_eigensystem(const RealMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("symmetric_eigensystem: matrix must be square and non-empty");
  }
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= kSymmetryTolerance)) {
    throw std::invalid_argument("symmetric_eigensystem: asymmetry " + std::to_string(asym) +
                                " exceeds 1e-12");
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(m, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("symmetric_eigensystem: QR iteration did not converge for n=" +
                           std::to_string(m.rows()));
  }
  // Eigen orders ascending.
  EigenSystem out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

std::string constraint_name(Constraint c) {
  return c == Constraint::kAverage ? "n_av" : "n_a";
}

Constraint parse_constraint(const std::string& name) {
  if (name == "n_av") return Constraint::kAverage;
  if (name == "n_a") return Constraint::kModeA;
  throw std::invalid_argument("unknown constraint '" + name + "' (expected n_av or n_a)");
}

RealMatrix build_g_lambda(double lambda, std::size_t d, std::size_t n_trunc, Constraint constraint) {
  check_lambda(lambda);
  RealMatrix g = build_block(d, n_trunc).entries;
  const double offset = weight_offset(d, constraint);
  for (Eigen::Index j = 0; j < g.rows(); ++j) g(j, j) -= lambda * (static_cast<double>(j) + offset);
  return g;
}

bool FrontierPoint::degenerate() const { return gap < kDegeneracyGap; }

bool FrontierPoint::truncation_limited() const {
  return lambda == 0.0 || !(tail_mass < kFrontierTailTolerance);
}

LagrangianSolver::LagrangianSolver(std::size_t d, std::size_t n_trunc, Constraint constraint)
    : block_(build_block(d, n_trunc)), constraint_(constraint) {}

FrontierPoint LagrangianSolver::solve(double lambda) const {
  check_lambda(lambda);
  const std::size_t d = block_.d;
  const double offset = weight_offset(d, constraint_);
  RealMatrix g = block_.entries;
  for (Eigen::Index j = 0; j < g.rows(); ++j) g(j, j) -= lambda * (static_cast<double>(j) + offset);
  const EigenSystem es = symmetric_eigensystem(g);

  RealVector top = es.vectors.col(0);
  fix_sign(top);
  FrontierPoint p;
  p.lambda = lambda;
  p.d = d;
  p.constraint = constraint_;
  p.g_max = es.values(0);
  p.state = PnesState::normalized(d, top.cast<std::complex<double>>());
  const auto energy = states::mean_photon(p.state);
  p.n_a = energy.n_a;
  p.n_av = energy.n_av;
  p.fidelity = quadratic_form(block_.entries, p.state.coeffs());
  p.tail_mass = top(top.size() - 1) * top(top.size() - 1);
  p.gap = es.values.size() > 1 ? es.values(0) - es.values(1)
                               : std::numeric_limits<double>::infinity();
  if (p.degenerate()) {
    const RealVector second = es.vectors.col(1);
    double n_a = 0.0;
    for (Eigen::Index j = 0; j < second.size(); ++j) n_a += static_cast<double>(j) * second(j) * second(j);
    p.rival_n_av = n_a + 0.5 * static_cast<double>(d);
  }
  return p;
}

FrontierPoint LagrangianSolver::at_energy(double target, double tol) const {
  if (!(target > 0.0) || !std::isfinite(target)) {
    throw std::invalid_argument("at_energy: target must be a finite value > 0");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("at_energy: tol must be > 0");
  const double floor = weight_offset(block_.d, constraint_);
  if (target <= floor) {
    throw BracketError("at_energy: target " + std::to_string(target) +
                       " is at or below the sector minimum " + std::to_string(floor));
  }

  // The constrained energy falls as lambda grows.
  double hi = 1.0;
  FrontierPoint p_hi = solve(hi);
  for (int i = 0; i < 60 && p_hi.constrained_energy() > target; ++i) {
    hi *= 2.0;
    p_hi = solve(hi);
  }
  if (p_hi.constrained_energy() > target) {
    throw BracketError("at_energy: no multiplier below 1e18 brings the energy down to target");
  }
  double lo = 0.5 * hi;
  FrontierPoint p_lo = solve(lo);
  for (int i = 0; i < 60 && p_lo.constrained_energy() < target; ++i) {
    lo *= 0.5;
    p_lo = solve(lo);
  }
  if (p_lo.constrained_energy() < target) {
    throw BracketError("at_energy: target " + std::to_string(target) +
                       " exceeds the capacity of n_trunc=" + std::to_string(n_trunc()));
  }
  if (std::abs(p_lo.constrained_energy() - target) <= tol) return p_lo;
  if (std::abs(p_hi.constrained_energy() - target) <= tol) return p_hi;

  const double bracket_lo = lo;
  const double bracket_hi = hi;
  bool monotone = true;
  for (int it = 0; it < kMaxBisection; ++it) {
    const double mid = std::sqrt(lo * hi);
    FrontierPoint p = solve(mid);
    const double e = p.constrained_energy();
    if (std::abs(e - target) <= tol) return p;
    if (e > p_lo.constrained_energy() || e < p_hi.constrained_energy()) {
      monotone = false;
      break;
    }
    if (e > target) {
      lo = mid;
      p_lo = std::move(p);
    } else {
      hi = mid;
      p_hi = std::move(p);
    }
    if (hi / lo - 1.0 < 1e-15) break;  // energy jumps across the target here
  }

  // Either n(lambda) is not monotone in the bracket or it is discontinuous
  // at the target. Report the closest grid point rather than interpolate.
  FrontierPoint best = std::abs(p_lo.constrained_energy() - target) <
                               std::abs(p_hi.constrained_energy() - target)
                           ? p_lo
                           : p_hi;
  if (!monotone) {
    const double step = std::log(bracket_hi / bracket_lo) / static_cast<double>(kFallbackGrid - 1);
    for (std::size_t i = 0; i < kFallbackGrid; ++i) {
      FrontierPoint p = solve(bracket_lo * std::exp(step * static_cast<double>(i)));
      if (std::abs(p.constrained_energy() - target) < std::abs(best.constrained_energy() - target)) {
        best = std::move(p);
      }
    }
  }
  best.non_monotone = true;
  return best;
}

FrontierPoint optimal_state_for_lambda(double lambda, std::size_t d, std::size_t n_trunc,
                                       Constraint constraint) {
  return LagrangianSolver(d, n_trunc, constraint).solve(lambda);
}

std::vector<double> log_lambda_grid(double lambda_min, double lambda_max, std::size_t steps) {
  if (!(lambda_min > 0.0) || !(lambda_max >= lambda_min) || !std::isfinite(lambda_max)) {
    throw std::invalid_argument("log_lambda_grid: need 0 < lambda_min <= lambda_max");
  }
  if (steps == 0) throw std::invalid_argument("log_lambda_grid: steps must be >= 1");
  if (steps == 1) return {lambda_max};
  std::vector<double> grid(steps);
  const double a = std::log(lambda_max);
  const double b = std::log(lambda_min);
  for (std::size_t i = 0; i < steps; ++i) {
    grid[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(steps - 1));
  }
  grid.front() = lambda_max;
  grid.back() = lambda_min;
  return grid;
}

std::vector<FrontierPoint> frontier(std::span<const double> lambda_grid, std::size_t d,
                                    std::size_t n_trunc, Constraint constraint, unsigned threads) {
  if (lambda_grid.empty()) throw std::invalid_argument("frontier: empty lambda grid");
  for (double lambda : lambda_grid) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw std::invalid_argument("frontier: lambda grid must be strictly positive");
    }
  }
  const LagrangianSolver solver(d, n_trunc, constraint);
  auto points = parallel_map(lambda_grid.size(), threads,
                             [&](std::size_t i) { return solver.solve(lambda_grid[i]); });
  std::stable_sort(points.begin(), points.end(), [](const FrontierPoint& a, const FrontierPoint& b) {
    if (a.n_av != b.n_av) return a.n_av < b.n_av;
    return a.lambda > b.lambda;
  });
  return points;
}

FrontierPoint optimal_fidelity_at_energy(double target, std::size_t d, std::size_t n_trunc,
                                         double tol, Constraint constraint) {
  return LagrangianSolver(d, n_trunc, constraint).at_energy(target, tol);
}

}  // namespace cvtele::optimizer
