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

#include "cvtele/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace cvtele::states {

namespace {

constexpr int kMaxBisection = 200;

// Builds a normalised d = 0 state from log-amplitudes, shifting by the
// maximum so that large parameters cannot overflow.
PnesState from_log_amplitudes(const std::vector<double>& log_c, std::string_view who) {
  const double peak = *std::max_element(log_c.begin(), log_c.end());
  CoeffVector c(static_cast<Eigen::Index>(log_c.size()));
  for (std::size_t j = 0; j < log_c.size(); ++j) {
    c(static_cast<Eigen::Index>(j)) = std::exp(log_c[j] - peak);
  }
  PnesState state = PnesState::normalized(0, std::move(c));
  const double tail = std::norm(state.coeffs()(state.coeffs().size() - 1));
  if (state.n_trunc() > 0 && !(tail < kTailTolerance)) {
    throw TruncationError(std::string(who) + ": tail weight " + std::to_string(tail) +
                          " at n_trunc=" + std::to_string(state.n_trunc()) +
                          " is not below 1e-12; increase the cutoff");
  }
  return state;
}

PnesState vacuum(std::size_t n_trunc) {
  CoeffVector c = CoeffVector::Zero(static_cast<Eigen::Index>(n_trunc) + 1);
  c(0) = 1.0;
  return PnesState(0, std::move(c));
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::kTmsv: return "tmsv";
    case Family::kTmc: return "tmc";
    case Family::kPssv: return "pssv";
    case Family::kRaw: return "raw";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "tmsv") return Family::kTmsv;
  if (name == "tmc") return Family::kTmc;
  if (name == "pssv") return Family::kPssv;
  if (name == "raw") return Family::kRaw;
  throw std::invalid_argument("unknown state family '" + std::string(name) + "'");
}

PnesState tmsv(double r, std::size_t n_trunc) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("tmsv: r must be >= 0");
  if (r == 0.0) return vacuum(n_trunc);
  const double log_t = std::log(std::tanh(r));
  std::vector<double> log_c(n_trunc + 1);
  for (std::size_t j = 0; j <= n_trunc; ++j) log_c[j] = static_cast<double>(j) * log_t;
  return from_log_amplitudes(log_c, "tmsv");
}

PnesState tmc(double x, std::size_t n_trunc) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("tmc: x must be >= 0");
  if (x == 0.0) return vacuum(n_trunc);
  const double log_x = std::log(x);
  std::vector<double> log_c(n_trunc + 1);
  for (std::size_t j = 0; j <= n_trunc; ++j) {
    log_c[j] = static_cast<double>(j) * log_x - std::lgamma(static_cast<double>(j) + 1.0);
  }
  return from_log_amplitudes(log_c, "tmc");
}

PnesState pssv(double x, std::size_t n_trunc) {
  if (x == 0.0) throw std::domain_error("pssv: x = 0 makes every coefficient vanish");
  if (!(x > 0.0)) throw std::invalid_argument("pssv: x must be positive");
  if (!(x < 1.0)) throw std::domain_error("pssv: x >= 1 is not normalisable");
  const double log_x = std::log(x);
  std::vector<double> log_c(n_trunc + 1);
  for (std::size_t j = 0; j <= n_trunc; ++j) {
    const double jp1 = static_cast<double>(j) + 1.0;
    log_c[j] = std::log(jp1) + jp1 * log_x;
  }
  return from_log_amplitudes(log_c, "pssv");
}

PnesState raw(std::size_t d, CoeffVector coeffs) {
  return PnesState::normalized(d, std::move(coeffs));
}

PnesState make(const StateFamily& family, std::size_t n_trunc) {
  switch (family.tag) {
    case Family::kTmsv: return tmsv(family.parameter, n_trunc);
    case Family::kTmc: return tmc(family.parameter, n_trunc);
    case Family::kPssv: return pssv(family.parameter, n_trunc);
    case Family::kRaw: break;
  }
  throw std::invalid_argument("make: RAW states need explicit coefficients");
}

MeanPhoton mean_photon(const PnesState& state) {
  double n_a = 0.0;
  const auto& c = state.coeffs();
  for (Eigen::Index j = 0; j < c.size(); ++j) n_a += static_cast<double>(j) * std::norm(c(j));
  const double d = static_cast<double>(state.offset());
  return {n_a, n_a + d, n_a + 0.5 * d};
}

std::vector<double> photon_distribution(const PnesState& state) {
  const auto& c = state.coeffs();
  std::vector<double> p(static_cast<std::size_t>(c.size()));
  for (Eigen::Index j = 0; j < c.size(); ++j) p[static_cast<std::size_t>(j)] = std::norm(c(j));
  return p;
}

double mandel_q(std::span<const double> distribution) {
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t j = 0; j < distribution.size(); ++j) {
    const double jd = static_cast<double>(j);
    mean += jd * distribution[j];
    second += jd * jd * distribution[j];
  }
  if (!(mean > 0.0)) throw std::domain_error("mandel_q: undefined for zero mean photon number");
  const double variance = second - mean * mean;
  return variance / mean - 1.0;
}

double mandel_q(const PnesState& state) {
  const auto p = photon_distribution(state);
  return mandel_q(std::span<const double>(p));
}

double entanglement_entropy(const PnesState& state) {
  double s = 0.0;
  for (double p : photon_distribution(state)) {
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

double solve_parameter_for_energy(Family family, double target, double tol, std::size_t n_trunc) {
  if (!(target >= 0.0) || !std::isfinite(target)) {
    throw std::invalid_argument("solve_parameter_for_energy: target must be a finite value >= 0");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("solve_parameter_for_energy: tol must be > 0");
  if (family == Family::kRaw) {
    throw std::invalid_argument("solve_parameter_for_energy: RAW has no parameter");
  }
  if (family == Family::kPssv && target == 0.0) {
    throw std::domain_error("solve_parameter_for_energy: zero energy needs the degenerate x = 0");
  }
  if (target == 0.0) return 0.0;

  // nullopt marks parameters the cutoff cannot represent.
  const auto energy = [&](double p) -> std::optional<double> {
    if (p == 0.0) return 0.0;  // vacuum limit for every family
    try {
      return mean_photon(make({family, p}, n_trunc)).n_av;
    } catch (const TruncationError&) {
      return std::nullopt;
    }
  };

  double lo = 0.0;
  double hi = 0.5;
  const auto grow = [&](double p) { return family == Family::kPssv ? 0.5 * (p + 1.0) : 2.0 * p; };
  std::optional<double> n_hi = energy(hi);
  for (int i = 0; i < 200 && n_hi && *n_hi < target; ++i) {
    lo = hi;
    hi = grow(hi);
    if (family == Family::kPssv && hi >= 1.0) break;
    n_hi = energy(hi);
  }
  // Walk back inside the representable range if the expansion overshot.
  for (int i = 0; i < 200 && !n_hi; ++i) {
    hi = 0.5 * (lo + hi);
    n_hi = energy(hi);
  }
  if (!n_hi || *n_hi < target) {
    throw BracketError("solve_parameter_for_energy: n_av = " + std::to_string(target) + " for " +
                       std::string(family_name(family)) +
                       " is not attainable at n_trunc=" + std::to_string(n_trunc));
  }

  for (int it = 0; it < kMaxBisection; ++it) {
    const double mid = 0.5 * (lo + hi);
    const auto n_mid = energy(mid);
    if (!n_mid) {
      hi = mid;
      continue;
    }
    if (std::abs(*n_mid - target) <= tol) return mid;
    if (*n_mid < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return mid;
  }
  throw ConvergenceError("solve_parameter_for_energy: no convergence within 200 iterations");
}

}  // namespace cvtele::states
