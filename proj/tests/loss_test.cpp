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

#include "cvtele/loss.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cvtele/errors.hpp"
#include "cvtele/gaussian.hpp"
#include "cvtele/optimizer.hpp"
#include "cvtele/states.hpp"

namespace {

namespace loss = cvtele::loss;
namespace st = cvtele::states;
using cvtele::CoeffVector;
using cvtele::PnesState;

constexpr double kR052 = 0.22610;

double total_weight(const loss::LossResult& r) {
  double s = 0.0;
  for (const auto& b : r.branches) s += b.weight;
  return s;
}

std::vector<PnesState> sample_states() {
  std::vector<PnesState> out = {st::tmsv(0.3, 100), st::tmc(0.8, 60), st::pssv(0.4, 80)};
  CoeffVector c(4);
  c << 0.6, -0.3, 0.5, 0.2;
  out.push_back(PnesState::normalized(3, c));
  out.push_back(cvtele::optimizer::optimal_fidelity_at_energy(0.204, 0, 100).state);
  return out;
}

TEST(KrausAmplitude, Examples) {
  for (std::size_t n : {0, 1, 7, 100}) EXPECT_DOUBLE_EQ(loss::kraus_amplitude(n, 0, 1.0), 1.0);
  EXPECT_EQ(loss::kraus_amplitude(3, 4, 0.5), 0.0);
  EXPECT_NEAR(loss::kraus_amplitude(2, 1, 0.5), std::sqrt(0.5), 1e-16);
  EXPECT_THROW(loss::kraus_amplitude(2, 1, 1.1), std::invalid_argument);
  EXPECT_THROW(loss::kraus_amplitude(2, 1, -0.1), std::invalid_argument);
}

TEST(KrausAmplitude, Completeness) {
  for (double eta : {0.3, 0.7}) {
    for (std::size_t n = 0; n <= 100; ++n) {
      double s = 0.0;
      for (std::size_t k = 0; k <= n + 2; ++k) s += std::pow(loss::kraus_amplitude(n, k, eta), 2);
      EXPECT_NEAR(s, 1.0, 1e-12) << n;
    }
  }
}

TEST(SymmetricLoss, LosslessIsIdentity) {
  const auto s = st::tmsv(0.4, 60);
  const auto r = loss::apply_symmetric_loss(s, 1.0);
  ASSERT_EQ(r.branches.size(), 1u);
  EXPECT_EQ(r.branches[0].lost_a, 0u);
  EXPECT_EQ(r.branches[0].lost_b, 0u);
  EXPECT_DOUBLE_EQ(r.branches[0].weight, 1.0);
  EXPECT_LE((r.branches[0].state.coeffs() - s.coeffs()).norm(), 1e-15);
  for (const auto& state : sample_states()) {
    EXPECT_NEAR(loss::fidelity_after_loss(state, 1.0), cvtele::fidelity_pure(state), 1e-14);
  }
}

TEST(SymmetricLoss, TotalLossGivesVacuum) {
  for (const auto& state : sample_states()) {
    const auto r = loss::apply_symmetric_loss(state, 0.0);
    const auto e = loss::mixture_mean_photon(r);
    EXPECT_NEAR(e.n_a, 0.0, 1e-12);
    EXPECT_NEAR(e.n_b, 0.0, 1e-12);
    loss::LossOptions all;
    all.k_max = state.n_trunc() + state.offset();
    EXPECT_NEAR(loss::fidelity_after_loss(state, 0.0, all), 0.5, 1e-12);
  }
}

TEST(SymmetricLoss, TracePreservationAndNormalizedBranches) {
  for (const auto& state : sample_states()) {
    for (double eta : {0.05, 0.3, 0.6, 0.9, 0.99}) {
      const auto r = loss::apply_symmetric_loss(state, eta);
      EXPECT_NEAR(total_weight(r), 1.0, 1e-9);
      EXPECT_LT(r.discarded_weight, 1e-10);
      for (const auto& b : r.branches) {
        EXPECT_NEAR(b.state.norm_squared(), 1.0, 1e-12);
        const long net = static_cast<long>(state.offset()) + static_cast<long>(b.lost_a) -
                         static_cast<long>(b.lost_b);
        EXPECT_EQ(b.swapped, net < 0);
        EXPECT_EQ(b.state.offset(), static_cast<std::size_t>(std::labs(net)));
      }
    }
  }
}

TEST(SymmetricLoss, BranchesOrderedByLostPhotons) {
  const auto r = loss::apply_symmetric_loss(st::tmsv(0.5, 80), 0.6);
  for (std::size_t i = 1; i < r.branches.size(); ++i) {
    const auto& a = r.branches[i - 1];
    const auto& b = r.branches[i];
    EXPECT_TRUE(a.lost_a < b.lost_a || (a.lost_a == b.lost_a && a.lost_b < b.lost_b));
  }
}

TEST(SymmetricLoss, EnergyDamping) {
  for (const auto& state : sample_states()) {
    const auto before = st::mean_photon(state);
    for (double eta : {0.2, 0.5, 0.8}) {
      const auto e = loss::mixture_mean_photon(loss::apply_symmetric_loss(state, eta));
      EXPECT_NEAR(e.n_a, eta * before.n_a, 1e-9);
      EXPECT_NEAR(e.n_b, eta * before.n_b, 1e-9);
    }
  }
  const auto t = st::tmsv(kR052, 100);
  const auto e = loss::mixture_mean_photon(loss::apply_symmetric_loss(t, 0.5));
  EXPECT_NEAR(0.5 * (e.n_a + e.n_b), 0.5 * std::pow(std::sinh(kR052), 2), 1e-9);
}

TEST(SymmetricLoss, EqualEnergyInputsStayEqual) {
  const double nbar = 0.3;
  const auto a = st::tmsv(cvtele::gaussian::energy_to_squeezing(nbar), 100);
  const double x = st::solve_parameter_for_energy(st::Family::kTmc, nbar, 1e-13);
  const auto b = st::tmc(x, 100);
  for (double eta : {0.4, 0.75}) {
    const auto ea = loss::mixture_mean_photon(loss::apply_symmetric_loss(a, eta));
    const auto eb = loss::mixture_mean_photon(loss::apply_symmetric_loss(b, eta));
    EXPECT_NEAR(ea.n_a, eb.n_a, 1e-9);
  }
}

TEST(SymmetricLoss, InsufficientKMaxRejected) {
  loss::LossOptions o;
  o.k_max = 1;
  EXPECT_THROW(loss::apply_symmetric_loss(st::tmsv(0.8, 100), 0.5, o), cvtele::TruncationError);
  loss::LossOptions tight;
  tight.k_cap = 2;
  EXPECT_THROW(loss::apply_symmetric_loss(st::tmsv(0.8, 100), 0.5, tight), cvtele::TruncationError);
}

TEST(SymmetricLoss, ExplicitKMaxMatchesAdaptive) {
  const auto s = st::tmsv(0.4, 100);
  const auto adaptive = loss::apply_symmetric_loss(s, 0.6);
  loss::LossOptions o;
  o.k_max = 2 * adaptive.k_max;
  EXPECT_NEAR(loss::fidelity_after_loss(s, 0.6, o), loss::fidelity_after_loss(s, 0.6), 1e-10);
}

TEST(FidelityAfterLoss, GaussianClosedForm) {
  EXPECT_NEAR(loss::fidelity_after_loss(st::tmsv(kR052, 100), 0.5), 0.55002, 1e-5);
  for (int ri = 1; ri <= 10; ++ri) {
    const double r = 0.1 * ri;
    const auto s = st::tmsv(r, 100);
    for (int ei = 1; ei <= 9; ++ei) {
      const double eta = 0.1 * ei;
      EXPECT_NEAR(loss::fidelity_after_loss(s, eta), cvtele::gaussian::lossy_tmsv_fidelity(r, eta), 1e-8)
          << "r=" << r << " eta=" << eta;
    }
  }
}

TEST(FidelityAfterLoss, MatchesCovarianceFormalism) {
  for (int ri = 1; ri <= 10; ++ri) {
    const double r = 0.1 * ri;
    const auto s = st::tmsv(r, 100);
    for (int ei = 3; ei <= 10; ++ei) {
      const double eta = 0.1 * ei;
      const double g = cvtele::gaussian::gaussian_fidelity(cvtele::gaussian::GaussianParams::tmsv(r, eta));
      EXPECT_NEAR(loss::fidelity_after_loss(s, eta), g, 1e-8);
    }
  }
}

TEST(FidelityAfterLoss, NonIncreasingAsTransmittanceDrops) {
  // Only for states beating the classical bound; loss drags any state towards 1/2.
  std::vector<PnesState> good = {st::tmsv(0.3, 100), st::tmsv(0.8, 100)};
  for (double n : {0.052, 0.204, 0.515}) good.push_back(cvtele::optimizer::optimal_fidelity_at_energy(n, 0, 100).state);
  for (const auto& state : good) {
    double prev = loss::fidelity_after_loss(state, 1.0);
    for (int i = 19; i >= 0; --i) {
      const double f = loss::fidelity_after_loss(state, 0.05 * i);
      EXPECT_LE(f, prev + 1e-12) << "eta=" << 0.05 * i;
      prev = f;
    }
  }
}

TEST(LossEvaluatorTest, AgreesWithFreeFunction) {
  const loss::LossEvaluator ev(100);
  for (const auto& state : sample_states()) {
    for (double eta : {0.35, 0.8}) {
      EXPECT_NEAR(ev.fidelity(state, eta), loss::fidelity_after_loss(state, eta), 1e-14);
    }
  }
}

TEST(DeltaCurve, LosslessRowMatchesFrontier) {
  const auto rows = loss::delta_F_curve(0.052, std::vector<double>{1.0});
  ASSERT_EQ(rows.size(), 1u);
  const auto p = cvtele::optimizer::optimal_fidelity_at_energy(0.052, 0, 100);
  EXPECT_NEAR(rows[0].f_candidate, p.fidelity, 1e-12);
  EXPECT_NEAR(rows[0].f_reference, cvtele::gaussian::tmsv_fidelity(cvtele::gaussian::energy_to_squeezing(0.052)),
              1e-12);
  EXPECT_NEAR(rows[0].delta, 0.0035, 0.0008);
}

TEST(DeltaCurve, PositiveDownToModerateTransmittance) {
  std::vector<double> grid;
  for (int i = 70; i <= 100; ++i) grid.push_back(0.01 * i);
  for (double nbar : {0.052, 0.204, 0.515}) {
    for (const auto& row : loss::delta_F_curve(nbar, grid)) {
      EXPECT_GT(row.delta, 0.0) << "nbar=" << nbar << " eta=" << row.eta;
    }
  }
  const auto at06 = loss::delta_F_curve(0.052, std::vector<double>{0.6});
  EXPECT_GE(at06[0].f_candidate, at06[0].f_reference);
}

TEST(DeltaCurve, IndependentOfThreadCount) {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.5 + 0.025 * i);
  const auto a = loss::delta_F_curve(0.204, grid, 100, {}, 1);
  const auto b = loss::delta_F_curve(0.204, grid, 100, {}, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].eta, b[i].eta);
    EXPECT_EQ(a[i].delta, b[i].delta);
  }
}

TEST(Crossover, DefaultEnergies) {
  const auto c = loss::crossover_transmittance(0.052);
  ASSERT_TRUE(c.eta_star.has_value());
  EXPECT_NEAR(*c.eta_star, 0.6, 0.05);
  EXPECT_GT(c.delta_at_unity, 0.0);
  for (double nbar : {0.204, 0.515}) {
    const auto e = loss::crossover_transmittance(nbar);
    ASSERT_TRUE(e.eta_star.has_value()) << nbar;
    EXPECT_GE(*e.eta_star, 0.6);
    EXPECT_LE(*e.eta_star, 0.8);
  }
}

TEST(Crossover, SignChangeBracketsRoot) {
  const auto c = loss::crossover_transmittance(0.052, 1e-5);
  ASSERT_TRUE(c.eta_star.has_value());
  const auto rows = loss::delta_F_curve(0.052, std::vector<double>{*c.eta_star - 2e-3, *c.eta_star + 2e-3});
  EXPECT_LT(rows[0].delta, 0.0);
  EXPECT_GT(rows[1].delta, 0.0);
}

TEST(Crossover, SelfComparisonHasNone) {
  const auto t = st::tmsv(0.4, 100);
  const auto c = loss::crossover_transmittance(t, t);
  EXPECT_FALSE(c.eta_star.has_value());
  EXPECT_EQ(c.delta_at_unity, 0.0);
  EXPECT_FALSE(c.note.empty());
}

}  // namespace
