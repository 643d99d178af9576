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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cvtele/errors.hpp"
#include "cvtele/fock.hpp"
#include "cvtele/gaussian.hpp"
#include "cvtele/parallel.hpp"
#include "cvtele/positivity.hpp"
#include "cvtele/states.hpp"

namespace {

namespace opt = cvtele::optimizer;
using cvtele::CoeffVector;
using cvtele::PnesState;
using cvtele::RealMatrix;

double tmsv_at(double nbar) {
  return cvtele::gaussian::tmsv_fidelity(cvtele::gaussian::energy_to_squeezing(nbar));
}

// Random d = 0 state with roughly geometric decay so its energy is moderate.
PnesState random_state(std::mt19937_64& rng, std::size_t d, std::size_t len) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> decay(0.05, 0.85);
  const double q = decay(rng);
  CoeffVector c(static_cast<Eigen::Index>(len));
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = g(rng) * std::pow(q, static_cast<double>(i));
  return PnesState::normalized(d, c);
}

TEST(SymmetricEigensystem, Identity) {
  const auto es = opt::symmetric_eigensystem(RealMatrix::Identity(3, 3));
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(es.values(i), 1.0);
}

TEST(SymmetricEigensystem, TwoByTwoClosedForm) {
  RealMatrix m(2, 2);
  m << 0.5, 0.25, 0.25, 0.25;
  const auto es = opt::symmetric_eigensystem(m);
  EXPECT_NEAR(es.values(0), (3 + std::sqrt(5.0)) / 8, 1e-15);
  EXPECT_NEAR(es.values(1), (3 - std::sqrt(5.0)) / 8, 1e-15);
  EXPECT_NEAR(es.values(0), 0.65451, 1e-5);
  EXPECT_NEAR(es.values(1), 0.09549, 1e-5);
}

TEST(SymmetricEigensystem, ReconstructionAndOrthonormality) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  RealMatrix a(60, 60);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  const RealMatrix m = a + a.transpose();
  const auto es = opt::symmetric_eigensystem(m);
  for (Eigen::Index i = 1; i < es.values.size(); ++i) EXPECT_GE(es.values(i - 1), es.values(i));
  const RealMatrix rec = es.vectors * es.values.asDiagonal() * es.vectors.transpose();
  EXPECT_LE((rec - m).cwiseAbs().maxCoeff(), 1e-9 * m.cwiseAbs().maxCoeff());
  const RealMatrix id = es.vectors.transpose() * es.vectors;
  EXPECT_LE((id - RealMatrix::Identity(60, 60)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(SymmetricEigensystem, RejectsAsymmetric) {
  RealMatrix m(2, 2);
  m << 1.0, 0.5, 0.4, 1.0;
  EXPECT_THROW(opt::symmetric_eigensystem(m), std::invalid_argument);
  EXPECT_THROW(opt::symmetric_eigensystem(RealMatrix(2, 3)), std::invalid_argument);
}

TEST(SymmetricEigensystem, FidelityBlockSpectrum) {
  const auto es = opt::symmetric_eigensystem(cvtele::build_block(0, 100).entries);
  EXPECT_LE(es.values(0), 1.0);
  EXPECT_GT(es.values(0), 0.5);
}

TEST(MinEigenvalueOfDifference, SingleElement) {
  const auto m = opt::min_eigenvalue_of_difference(1, 0);
  EXPECT_DOUBLE_EQ(m.value, 0.25);
  EXPECT_TRUE(m.certified_positive);
  EXPECT_THROW(opt::min_eigenvalue_of_difference(0, 10), std::invalid_argument);
}

TEST(MinEigenvalueOfDifference, MatchesDoubleWhereResolvable) {
  for (std::size_t d : {1, 2, 5}) {
    for (std::size_t n : {1, 3, 6}) {
      const RealMatrix diff = cvtele::build_block(0, n).entries - cvtele::build_block(d, n).entries;
      const Eigen::SelfAdjointEigenSolver<RealMatrix> es(diff, Eigen::EigenvaluesOnly);
      const double expected = es.eigenvalues().minCoeff();
      const auto m = opt::min_eigenvalue_of_difference(d, n);
      EXPECT_NEAR(m.value, expected, 1e-15 + 1e-9 * expected) << d << "," << n;
      EXPECT_LE(m.error_bound, 1e-12 * m.value);
    }
  }
}

TEST(MinEigenvalueOfDifference, PositiveForAllSectorsAtDefaultCutoff) {
  for (std::size_t d = 1; d <= 40; ++d) {
    const auto m = opt::min_eigenvalue_of_difference(d, 100);
    EXPECT_TRUE(m.certified_positive) << "d=" << d << " " << m.decimal;
    EXPECT_GT(m.value, 0.0);
    EXPECT_LT(m.error_bound, m.value);
  }
}

TEST(MinEigenvalueOfDifference, PositiveUnderTruncationGrowth) {
  for (std::size_t n : {50, 100, 150}) {
    const auto m = opt::min_eigenvalue_of_difference(1, n);
    EXPECT_TRUE(m.certified_positive) << n;
    EXPECT_EQ(m.n_trunc, n);
  }
}

TEST(MinEigenvalueOfDifference, ConcurrentCallsMatchSerial) {
  std::vector<double> serial;
  for (std::size_t d = 1; d <= 12; ++d) serial.push_back(opt::min_eigenvalue_of_difference(d, 50).value);
  for (int round = 0; round < 3; ++round) {
    const auto par = cvtele::parallel_map(12, 4, [](std::size_t i) {
      return opt::min_eigenvalue_of_difference(i + 1, 50).value;
    });
    for (std::size_t i = 0; i < serial.size(); ++i) EXPECT_EQ(par[i], serial[i]) << "d=" << i + 1;
  }
}

TEST(MinEigenvalueOfBlock, MatchesDoubleWhereResolvable) {
  const Eigen::SelfAdjointEigenSolver<RealMatrix> es(cvtele::build_block(3, 4).entries, Eigen::EigenvaluesOnly);
  const auto m = opt::min_eigenvalue_of_block(3, 4);
  EXPECT_NEAR(m.value, es.eigenvalues().minCoeff(), 1e-14);
}

TEST(GLambda, Construction) {
  const auto block = cvtele::build_block(2, 20).entries;
  EXPECT_EQ(opt::build_g_lambda(0.0, 2, 20), block);
  const auto g = opt::build_g_lambda(0.1, 0, 5);
  EXPECT_NEAR(g(0, 0), 0.5, 1e-16);
  EXPECT_NEAR(g(1, 1), 0.15, 1e-16);
  EXPECT_NEAR(g(2, 2), 3.0 / 16 - 0.2, 1e-16);
  EXPECT_EQ(g(0, 1), 0.25);
  EXPECT_EQ(opt::build_g_lambda(0.3, 0, 10, opt::Constraint::kModeA), opt::build_g_lambda(0.3, 0, 10));
  const RealMatrix diff = opt::build_g_lambda(0.3, 2, 10, opt::Constraint::kModeA) - opt::build_g_lambda(0.3, 2, 10);
  EXPECT_LE((diff - 0.3 * RealMatrix::Identity(11, 11)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(opt::build_g_lambda(-0.1, 0, 5), std::invalid_argument);
}

TEST(Constraint, Names) {
  EXPECT_EQ(opt::parse_constraint("n_av"), opt::Constraint::kAverage);
  EXPECT_EQ(opt::parse_constraint("n_a"), opt::Constraint::kModeA);
  EXPECT_EQ(opt::constraint_name(opt::Constraint::kModeA), "n_a");
  EXPECT_THROW(opt::parse_constraint("n_b"), std::invalid_argument);
}

TEST(OptimalStateForLambda, LargeLambdaIsNearVacuum) {
  const auto p = opt::optimal_state_for_lambda(10.0, 0, 100);
  EXPECT_GT(std::abs(p.state.coeffs()(0)), 0.99);
  EXPECT_NEAR(p.g_max, 0.5, 0.01);
  EXPECT_LT(p.n_av, 0.1);
  EXPECT_GT(p.fidelity, 0.5);
  EXPECT_LT(p.fidelity, 0.62);
}

TEST(OptimalStateForLambda, Invariants) {
  for (std::size_t d : {0, 1, 3}) {
    for (double lambda : {0.02, 0.1, 0.5, 2.0, 8.0}) {
      const auto p = opt::optimal_state_for_lambda(lambda, d, 100);
      EXPECT_NEAR(p.fidelity, p.g_max + lambda * p.n_av, 1e-10);
      EXPECT_NEAR(p.fidelity, cvtele::fidelity_pure(p.state), 1e-10);
      EXPECT_GT(p.state.coeffs()(0).real(), 0.0);
      EXPECT_EQ(p.state.offset(), d);
      EXPECT_NEAR(p.n_a, p.n_av - 0.5 * d, 1e-12);
      EXPECT_FALSE(p.degenerate());
      if (d == 0) EXPECT_GE(p.fidelity, 0.5);
    }
  }
}

TEST(OptimalStateForLambda, SmallLambdaApproachesUnitFidelity) {
  const auto p = opt::optimal_state_for_lambda(1e-4, 0, 100);
  EXPECT_GT(p.fidelity, 0.95);
  EXPECT_GT(p.n_av, 5.0);
  EXPECT_TRUE(p.truncation_limited());
  EXPECT_TRUE(opt::optimal_state_for_lambda(0.0, 0, 30).truncation_limited());
  EXPECT_FALSE(opt::optimal_state_for_lambda(0.5, 0, 100).truncation_limited());
}

TEST(LambdaGrid, LogSpacedDescending) {
  const auto g = opt::log_lambda_grid(1e-4, 2.0, 200);
  ASSERT_EQ(g.size(), 200u);
  EXPECT_EQ(g.front(), 2.0);
  EXPECT_EQ(g.back(), 1e-4);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_LT(g[i], g[i - 1]);
  EXPECT_NEAR(g[1] / g[0], g[100] / g[99], 1e-12);
  EXPECT_EQ(opt::log_lambda_grid(0.3, 0.5, 1), std::vector<double>{0.5});
  EXPECT_THROW(opt::log_lambda_grid(0.0, 1.0, 3), std::invalid_argument);
  EXPECT_THROW(opt::log_lambda_grid(2.0, 1.0, 3), std::invalid_argument);
}

TEST(Frontier, SingletonMatchesDirectSolve) {
  const std::vector<double> grid = {0.3};
  const auto f = opt::frontier(grid, 0, 100);
  ASSERT_EQ(f.size(), 1u);
  const auto p = opt::optimal_state_for_lambda(0.3, 0, 100);
  EXPECT_EQ(f[0].fidelity, p.fidelity);
  EXPECT_EQ(f[0].n_av, p.n_av);
}

TEST(Frontier, MonotoneAndAboveTmsv) {
  const auto grid = opt::log_lambda_grid(0.03, 10.0, 120);
  const auto f = opt::frontier(grid, 0, 100);
  ASSERT_EQ(f.size(), grid.size());
  std::size_t checked = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i > 0) {
      EXPECT_GE(f[i].n_av, f[i - 1].n_av);
      EXPECT_GE(f[i].fidelity, f[i - 1].fidelity);
    }
    if (f[i].truncation_limited()) continue;
    ++checked;
    EXPECT_GE(f[i].fidelity, tmsv_at(f[i].n_av)) << "n_av=" << f[i].n_av;
  }
  EXPECT_GT(checked, 100u);
}

TEST(Frontier, IndependentOfThreadCount) {
  const auto grid = opt::log_lambda_grid(1e-3, 2.0, 40);
  const auto a = opt::frontier(grid, 1, 80, opt::Constraint::kAverage, 1);
  const auto b = opt::frontier(grid, 1, 80, opt::Constraint::kAverage, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].lambda, b[i].lambda);
    EXPECT_EQ(a[i].fidelity, b[i].fidelity);
    EXPECT_EQ(a[i].state.coeffs(), b[i].state.coeffs());
  }
}

TEST(Frontier, RejectsBadGrid) {
  EXPECT_THROW(opt::frontier(std::vector<double>{}, 0, 10), std::invalid_argument);
  EXPECT_THROW(opt::frontier(std::vector<double>{0.1, -0.1}, 0, 10), std::invalid_argument);
}

TEST(OptimalFidelityAtEnergy, Examples) {
  const auto p = opt::optimal_fidelity_at_energy(0.052, 0, 100);
  EXPECT_NEAR(p.n_av, 0.052, 1e-10);
  EXPECT_NEAR(p.fidelity, 0.6147, 0.001);
  // Under the average constraint d = 1 cannot go below n_av = 1/2.
  EXPECT_THROW(opt::optimal_fidelity_at_energy(0.052, 1, 100), cvtele::BracketError);
  const auto q = opt::optimal_fidelity_at_energy(0.052, 1, 100, 1e-10, opt::Constraint::kModeA);
  EXPECT_NEAR(q.n_a, 0.052, 1e-10);
  EXPECT_LT(q.fidelity, p.fidelity);
  const auto tiny = opt::optimal_fidelity_at_energy(1e-7, 0, 100);
  EXPECT_NEAR(tiny.fidelity, 0.5, 1e-3);
  EXPECT_THROW(opt::optimal_fidelity_at_energy(500.0, 0, 30), cvtele::BracketError);
}

TEST(OptimalFidelityAtEnergy, StableUnderTruncationGrowth) {
  const double a = opt::optimal_fidelity_at_energy(0.5, 0, 100).fidelity;
  const double b = opt::optimal_fidelity_at_energy(0.5, 0, 150).fidelity;
  EXPECT_LT(std::abs(a - b), 1e-8);
}

TEST(Optimality, RandomPureStatesBelowFrontier) {
  std::mt19937_64 rng(2024);
  int tested = 0;
  while (tested < 200) {
    const auto s = random_state(rng, 0, 30);
    const double n = cvtele::states::mean_photon(s).n_av;
    if (n < 0.01 || n > 2.0) continue;
    ++tested;
    const auto best = opt::optimal_fidelity_at_energy(n, 0, 100);
    EXPECT_LE(cvtele::fidelity_pure(s), best.fidelity + 1e-9) << "n_av=" << n;
  }
}

TEST(Optimality, RandomMixturesBelowFrontier) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tested = 0;
  while (tested < 200) {
    const int parts = 1 + static_cast<int>(u(rng) * 4);
    std::vector<cvtele::MixtureComponent> mix;
    double total = 0.0;
    for (int k = 0; k < parts; ++k) {
      const auto d = static_cast<std::size_t>(u(rng) * 3);
      const double w = u(rng) + 1e-3;
      mix.push_back({w, random_state(rng, d, 25)});
      total += w;
    }
    double n = 0.0;
    for (auto& c : mix) {
      c.weight /= total;
      n += c.weight * cvtele::states::mean_photon(c.state).n_av;
    }
    if (n < 0.01 || n > 2.0) continue;
    ++tested;
    const auto best = opt::optimal_fidelity_at_energy(n, 0, 100);
    EXPECT_LE(cvtele::fidelity_mixture(mix), best.fidelity + 1e-9) << "n=" << n;
  }
}

TEST(Optimality, ZeroSectorDominatesForEqualCoefficients) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_state(rng, 0, 20);
    const auto& c = s.coeffs();
    for (std::size_t d = 1; d <= 10; ++d) {
      const RealMatrix diff = cvtele::build_block(0, 19).entries - cvtele::build_block(d, 19).entries;
      EXPECT_GT(cvtele::quadratic_form(diff, c), 0.0) << "d=" << d;
    }
  }
}

TEST(Optimality, LambdaIsSlopeOfFrontier) {
  for (double n : {0.05, 0.1, 0.2, 0.5, 1.0}) {
    const auto p = opt::optimal_fidelity_at_energy(n, 0, 100, 1e-13);
    const double h = 1e-3 * n;
    const double up = opt::optimal_fidelity_at_energy(n + h, 0, 100, 1e-13).fidelity;
    const double down = opt::optimal_fidelity_at_energy(n - h, 0, 100, 1e-13).fidelity;
    const double slope = (up - down) / (2 * h);
    EXPECT_NEAR(slope / p.lambda, 1.0, 0.02) << "n=" << n;
  }
}

TEST(SectorOrdering, ZeroSectorBeatsOneAndTwoAtEqualModeAEnergy) {
  for (int i = 1; i <= 40; ++i) {
    const double na = 0.05 * i;
    const auto f0 = opt::optimal_fidelity_at_energy(na, 0, 100, 1e-10, opt::Constraint::kModeA).fidelity;
    const auto f1 = opt::optimal_fidelity_at_energy(na, 1, 100, 1e-10, opt::Constraint::kModeA).fidelity;
    const auto f2 = opt::optimal_fidelity_at_energy(na, 2, 100, 1e-10, opt::Constraint::kModeA).fidelity;
    EXPECT_GT(f0, f1) << na;
    EXPECT_GT(f0, f2) << na;
  }
  EXPECT_LT(opt::optimal_fidelity_at_energy(0.01, 1, 100, 1e-10, opt::Constraint::kModeA).fidelity, 0.5);
}

TEST(LagrangianSolverTest, AtEnergyHitsTarget) {
  const opt::LagrangianSolver s(0, 100);
  for (double n : {0.01, 0.3, 1.5}) {
    const auto p = s.at_energy(n, 1e-12);
    EXPECT_NEAR(p.n_av, n, 1e-12);
    EXPECT_FALSE(p.non_monotone);
  }
  EXPECT_THROW(s.at_energy(0.0), std::invalid_argument);
}

}  // namespace
