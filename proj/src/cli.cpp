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

#include "cvtele/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <thread>

#include <CLI11.hpp>

#include "cvtele/errors.hpp"
#include "cvtele/fock.hpp"
#include "cvtele/gaussian.hpp"
#include "cvtele/loss.hpp"
#include "cvtele/optimizer.hpp"
#include "cvtele/oracle.hpp"
#include "cvtele/parallel.hpp"
#include "cvtele/positivity.hpp"
#include "cvtele/states.hpp"

namespace cvtele::cli {

namespace {

using io::Table;
using io::Value;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

Value idx(std::size_t n) { return static_cast<std::int64_t>(n); }

io::KeyValues reference_metadata() {
  return {{"f_cl", gaussian::kClassicalBound}, {"f_nc", gaussian::kNoCloningBound}};
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (double x : xs) s += (s.empty() ? "" : ";") + io::format_value(x);
  return s;
}

std::string join(const std::vector<std::size_t>& xs) {
  std::string s;
  for (auto x : xs) s += (s.empty() ? "" : ";") + std::to_string(x);
  return s;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n == 1) return {b};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = b;
  return out;
}

double tmsv_at(double nbar) { return gaussian::tmsv_fidelity(gaussian::energy_to_squeezing(nbar)); }

double equivalent_tmsv_energy(double f) {
  if (!(f >= gaussian::kClassicalBound && f < 1.0)) return kNan;
  return gaussian::tmsv_energy_for_fidelity(f);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

void require(bool cond, const std::string& message) {
  if (!cond) throw UsageError(message);
}

PnesState family_state(const std::string& family, double nbar, const RunConfig& c) {
  if (family == "opt") return optimizer::optimal_fidelity_at_energy(nbar, 0, c.n_trunc, c.tol).state;
  if (family == "tmsv") return states::tmsv(gaussian::energy_to_squeezing(nbar), c.n_trunc);
  const auto tag = states::parse_family(family);
  const double x = states::solve_parameter_for_energy(tag, nbar, c.tol, c.n_trunc);
  return states::make({tag, x}, c.n_trunc);
}

// -- verify suites ------------------------------------------------------------

struct Check {
  std::string suite;
  std::string name;
  std::size_t cases = 0;
  double worst = 0.0;
  double tolerance = 0.0;
  std::string worst_case;
  std::string error;

  void record(double residual, const std::string& where) {
    ++cases;
    if (!(residual <= worst) && !std::isnan(worst)) {
      worst = residual;
      worst_case = where;
    }
  }
  bool passed() const { return error.empty() && cases > 0 && worst <= tolerance; }
};

template <typename Fn>
Check run_check(std::string suite, std::string name, double tolerance, Fn&& body) {
  Check c;
  c.suite = std::move(suite);
  c.name = std::move(name);
  c.tolerance = tolerance;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.error = e.what();
  }
  return c;
}

std::string tuple_label(std::initializer_list<std::size_t> xs) {
  std::string s = "(";
  for (auto x : xs) s += (s.size() > 1 ? "," : "") + std::to_string(x);
  return s + ")";
}

void oracle_suite(const RunConfig& config, std::vector<Check>& out) {
  constexpr std::size_t kMaxIndex = 15;
  constexpr std::size_t kMaxSector = 5;
  // Per-mode cutoff: both j and j + d stay within --trunc.
  const std::size_t max_d = std::min(kMaxSector, config.n_trunc);
  const std::size_t max_j = std::min(kMaxIndex, config.n_trunc);
  const std::size_t total = std::min(2 * max_j + max_d, oracle::kMaxKernelTrunc);

  const auto x = oracle::gauss_kernel_x(total);
  out.push_back(run_check("oracle", "kernel_vacuum_column", 1e-12, [&](Check& c) {
    for (std::size_t n = 0; n <= total; ++n) {
      double expected = 0.0;
      if (n % 2 == 0) {
        const double half = static_cast<double>(n / 2);
        const double nd = static_cast<double>(n);
        const double sign = (n / 2) % 2 == 0 ? 1.0 : -1.0;
        expected = sign * std::exp(0.5 * std::lgamma(nd + 1.0) - std::lgamma(half + 1.0) -
                                   (nd + 0.5) * std::numbers::ln2);
      }
      const auto i = static_cast<Eigen::Index>(n);
      c.record(std::abs(x.entries(i, 0) - expected), tuple_label({n, 0}));
    }
  }));
  out.push_back(run_check("oracle", "kernel_parity_symmetry", 0.0, [&](Check& c) {
    for (Eigen::Index a = 0; a < x.entries.rows(); ++a) {
      for (Eigen::Index b = 0; b < x.entries.cols(); ++b) {
        double r = std::abs(x.entries(a, b) - x.entries(b, a));
        if ((a + b) % 2 == 1) r = std::max(r, std::abs(x.entries(a, b)));
        c.record(r, tuple_label({static_cast<std::size_t>(a), static_cast<std::size_t>(b)}));
      }
    }
  }));
  const auto bs = oracle::beamsplitter_matrix(total);
  out.push_back(run_check("oracle", "beamsplitter_unitarity", 1e-10, [&](Check& c) {
    for (std::size_t n = 0; n <= total; ++n) c.record(bs.unitarity_residual(n), tuple_label({n}));
  }));

  const oracle::BruteForceFidelity bf(total);
  out.push_back(run_check("oracle", "element_agreement", 1e-8, [&](Check& c) {
    for (std::size_t d = 0; d <= max_d; ++d) {
      for (std::size_t j = 0; j <= max_j && j + d <= config.n_trunc; ++j) {
        for (std::size_t l = 0; l <= max_j && l + d <= config.n_trunc; ++l) {
          const double r = std::abs(bf.element(j, j + d, l, l + d) - fidelity_element(j, l, d));
          c.record(r, "j,l,d=" + tuple_label({j, l, d}));
        }
      }
    }
  }));
  out.push_back(run_check("oracle", "selection_rule", 1e-12, [&](Check& c) {
    const std::size_t n = std::min<std::size_t>(6, total / 2);
    for (std::size_t j = 0; j <= n; ++j) {
      for (std::size_t k = 0; k <= n; ++k) {
        for (std::size_t l = 0; l <= n; ++l) {
          for (std::size_t m = 0; m <= n; ++m) {
            if (j + m == k + l) continue;
            double r = std::abs(bf.raw_element(j, k, l, m));
            if (bf.element(j, k, l, m) != 0.0) r = std::numeric_limits<double>::infinity();
            c.record(r, tuple_label({j, k, l, m}));
          }
        }
      }
    }
  }));
}

void binomial_suite(std::vector<Check>& out) {
  out.push_back(run_check("binomial", "central_convolution", 0.0, [&](Check& c) {
    for (unsigned s = 0; s <= 25; ++s) {
      const std::uint64_t expected = std::uint64_t{1} << (2 * s);
      c.record(oracle::central_binomial_convolution(s) == expected ? 0.0 : 1.0, "s=" + std::to_string(s));
    }
  }));
  out.push_back(run_check("binomial", "alternating_sum", 0.0, [&](Check& c) {
    for (unsigned s = 0; s <= 25; ++s) {
      for (unsigned t = 0; t <= s; ++t) {
        const auto expected = static_cast<std::int64_t>(oracle::binomial_u64(s, t));
        c.record(oracle::alternating_binomial_sum(s, t) == expected ? 0.0 : 1.0,
                 "s,t=" + tuple_label({s, t}));
      }
    }
  }));
}

void gaussian_suite(const RunConfig& config, std::vector<Check>& out) {
  out.push_back(run_check("gaussian", "tmsv_closed_form", 1e-8, [&](Check& c) {
    for (int i = 1; i <= 20; ++i) {
      const double r = 0.05 * i;
      const double f = fidelity_pure(states::tmsv(r, config.n_trunc));
      c.record(std::abs(f - gaussian::tmsv_fidelity(r)), "r=" + io::format_value(r));
    }
  }));
  out.push_back(run_check("gaussian", "lossy_tmsv_closed_form", 1e-8, [&](Check& c) {
    for (double r : {0.1, 0.3, 0.5}) {
      const auto state = states::tmsv(r, config.n_trunc);
      for (int i = 0; i <= 5; ++i) {
        const double eta = 0.5 + 0.1 * i;
        const double f = loss::fidelity_after_loss(state, eta);
        c.record(std::abs(f - gaussian::lossy_tmsv_fidelity(r, eta)),
                 "r,eta=" + io::format_value(r) + "," + io::format_value(eta));
      }
    }
  }));
  out.push_back(run_check("gaussian", "covariance_form", 1e-14, [&](Check& c) {
    for (int i = 0; i <= 20; ++i) {
      const double r = 0.1 * i;
      for (double eta : {0.3, 0.6, 1.0}) {
        const double f = gaussian::gaussian_fidelity(gaussian::GaussianParams::tmsv(r, eta));
        c.record(std::abs(f - gaussian::lossy_tmsv_fidelity(r, eta)),
                 "r,eta=" + io::format_value(r) + "," + io::format_value(eta));
      }
      c.record(std::abs(gaussian::tmsv_symplectic_nu(r).fidelity_bound - gaussian::tmsv_fidelity(r)),
               "nu r=" + io::format_value(r));
    }
  }));
}

}  // namespace

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  const auto number = [&](const std::string& tok) -> std::size_t {
    require(!tok.empty() && tok.find_first_not_of("0123456789") == std::string::npos,
            "malformed index '" + tok + "' in list '" + text + "'");
    return std::stoul(tok);
  };
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string tok = text.substr(start, end - start);
    const auto dash = tok.find('-');
    if (dash == std::string::npos) {
      out.push_back(number(tok));
    } else {
      const std::size_t a = number(tok.substr(0, dash));
      const std::size_t b = number(tok.substr(dash + 1));
      require(a <= b, "descending range '" + tok + "'");
      require(b - a < 100000, "range '" + tok + "' too long");
      for (std::size_t v = a; v <= b; ++v) out.push_back(v);
    }
    start = end + 1;
  }
  return out;
}

void validate(RunConfig& c) {
  const std::string& cmd = c.subcommand;
  require(c.n_trunc <= kMaxBlockTrunc, "--trunc must be <= " + std::to_string(kMaxBlockTrunc));
  require(finite_positive(c.tol), "--tol must be a positive number");
  if (c.threads == 0) c.threads = std::max(1u, std::thread::hardware_concurrency());

  if (c.nbar_list) {
    require(!c.nbar_list->empty(), "--nbar list is empty");
    for (double n : *c.nbar_list) require(finite_positive(n), "--nbar values must be positive");
  }
  if (c.d_list) require(!c.d_list->empty(), "--d list is empty");

  if (cmd == "pd-check") {
    if (!c.d_list) c.d_list = parse_index_list("1-40");
    for (auto d : *c.d_list) require(d >= 1, "pd-check needs d >= 1");
  } else if (cmd == "frontier") {
    if (!c.d_list) c.d_list = std::vector<std::size_t>{0};
    if (!c.nbar_list) c.nbar_list = std::vector<double>{0.052};
    require(finite_positive(c.lambda_min) && finite_positive(c.lambda_max),
            "--lambda-min and --lambda-max must be positive");
    require(c.lambda_min <= c.lambda_max, "--lambda-min exceeds --lambda-max");
    require(c.lambda_steps >= 1, "--lambda-steps must be >= 1");
    optimizer::parse_constraint(c.constraint);
  } else if (cmd == "states") {
    require(!c.d_list, "states does not take --d");
    if (!c.nbar_list) c.nbar_list = std::vector<double>{0.052};
  } else if (cmd == "loss") {
    static const std::vector<std::string> kFamilies = {"opt", "tmsv", "tmc", "pssv", "raw"};
    require(std::find(kFamilies.begin(), kFamilies.end(), c.family) != kFamilies.end(),
            "unknown --family '" + c.family + "'");
    require(c.eta_min > 0.0 && c.eta_min <= c.eta_max && c.eta_max <= 1.0,
            "need 0 < --eta-min <= --eta-max <= 1");
    require(c.eta_steps >= 1, "--eta-steps must be >= 1");
    if (c.family == "raw") {
      require(!c.coeffs.empty(), "--family raw needs --coeffs");
      require(!c.nbar_list, "--family raw takes its energy from --coeffs, not --nbar");
      if (!c.d_list) c.d_list = std::vector<std::size_t>{0};
      require(c.d_list->size() == 1, "--family raw takes a single --d");
      for (double x : c.coeffs) require(std::isfinite(x), "--coeffs must be finite");
    } else {
      require(c.coeffs.empty(), "--coeffs needs --family raw");
      require(!c.d_list, "--d needs --family raw");
      if (!c.nbar_list) c.nbar_list = std::vector<double>{0.052, 0.204, 0.515};
    }
  } else if (cmd == "verify") {
    require(c.suite == "oracle" || c.suite == "binomial" || c.suite == "gaussian" || c.suite == "all",
            "unknown --suite '" + c.suite + "'");
  } else {
    throw UsageError("unknown subcommand '" + cmd + "'");
  }
}

CommandResult cmd_pd_check(const RunConfig& c) {
  const auto& ds = *c.d_list;
  const auto mins = parallel_map(ds.size(), c.threads, [&](std::size_t i) {
    return optimizer::min_eigenvalue_of_difference(ds[i], c.n_trunc);
  });
  CommandResult res;
  res.report.command = "pd-check";
  res.report.config = {{"n_trunc", idx(c.n_trunc)}, {"d", join(ds)}};
  res.report.metadata = reference_metadata();
  Table t({"d", "n_trunc", "min_eigenvalue", "min_eigenvalue_decimal", "error_bound", "digits",
           "certified_positive"});
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& m = mins[i];
    t.add_row({idx(ds[i]), idx(m.n_trunc), m.value, m.decimal, m.error_bound, idx(m.digits),
               m.certified_positive});
    if (!m.certified_positive && res.ok) {
      res.ok = false;
      res.failure = "d=" + std::to_string(ds[i]) + " minimum eigenvalue " + m.decimal +
                    " not certified positive";
    }
  }
  res.report.rows = std::move(t);
  return res;
}

CommandResult cmd_frontier(const RunConfig& c) {
  const auto constraint = optimizer::parse_constraint(c.constraint);
  const auto grid = optimizer::log_lambda_grid(c.lambda_min, c.lambda_max, c.lambda_steps);
  CommandResult res;
  res.report.command = "frontier";
  res.report.config = {{"n_trunc", idx(c.n_trunc)},       {"d", join(*c.d_list)},
                       {"lambda_min", c.lambda_min},      {"lambda_max", c.lambda_max},
                       {"lambda_steps", idx(c.lambda_steps)}, {"constraint", c.constraint},
                       {"nbar", join(*c.nbar_list)},      {"tol", c.tol}};
  res.report.metadata = reference_metadata();
  Table rows({"d", "n_trunc", "constraint", "lambda", "n_av", "n_a", "f_pnes", "f_tmsv", "delta",
              "n_tmsv_equal_f", "g_max", "gap", "tail_mass", "truncation_limited"});
  Table summary({"kind", "d", "n_trunc", "target", "lambda", "n_av", "n_a", "f_pnes", "f_tmsv", "delta",
                 "n_tmsv_equal_f", "overhead"});
  for (std::size_t d : *c.d_list) {
    auto points = optimizer::frontier(grid, d, c.n_trunc, constraint, c.threads);
    std::stable_sort(points.begin(), points.end(),
                     [](const auto& a, const auto& b) { return a.n_a < b.n_a; });
    const optimizer::FrontierPoint* peak = nullptr;
    double peak_delta = -std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
      const double ft = tmsv_at(p.n_av);
      rows.add_row({idx(d), idx(c.n_trunc), c.constraint, p.lambda, p.n_av, p.n_a, p.fidelity, ft,
                    p.fidelity - ft, equivalent_tmsv_energy(p.fidelity), p.g_max, p.gap, p.tail_mass,
                    p.truncation_limited()});
      if (!p.truncation_limited() && p.fidelity - ft > peak_delta) {
        peak_delta = p.fidelity - ft;
        peak = &p;
      }
    }
    const auto add_summary = [&](const std::string& kind, double target, const optimizer::FrontierPoint& p) {
      const double ft = tmsv_at(p.n_av);
      const double eq = equivalent_tmsv_energy(p.fidelity);
      summary.add_row({kind, idx(d), idx(c.n_trunc), target, p.lambda, p.n_av, p.n_a, p.fidelity, ft,
                       p.fidelity - ft, eq, eq / p.n_av - 1.0});
    };
    if (peak) add_summary("peak", kNan, *peak);
    const optimizer::LagrangianSolver solver(d, c.n_trunc, constraint);
    for (double target : *c.nbar_list) {
      const double floor = constraint == optimizer::Constraint::kAverage ? 0.5 * static_cast<double>(d) : 0.0;
      if (target <= floor) continue;
      add_summary("energy", target, solver.at_energy(target, c.tol));
    }
  }
  res.report.rows = std::move(rows);
  res.report.summary = std::move(summary);
  return res;
}

CommandResult cmd_states(const RunConfig& c) {
  CommandResult res;
  res.report.command = "states";
  res.report.config = {{"n_trunc", idx(c.n_trunc)}, {"nbar", join(*c.nbar_list)}, {"tol", c.tol}};
  res.report.metadata = reference_metadata();
  res.report.metadata.emplace_back("entropy_unit", std::string(c.bits ? "bits" : "nats"));
  const double entropy_scale = c.bits ? 1.0 / std::numbers::ln2 : 1.0;

  Table rows({"nbar", "d", "n_trunc", "j", "p_opt", "p_tmsv", "p_tmc", "p_pssv"});
  Table summary({"nbar", "family", "parameter", "n_av", "fidelity", "mandel_q", "entropy"});
  for (double nbar : *c.nbar_list) {
    const auto opt = optimizer::optimal_fidelity_at_energy(nbar, 0, c.n_trunc, c.tol);
    const double r = gaussian::energy_to_squeezing(nbar);
    const double x_tmc = states::solve_parameter_for_energy(states::Family::kTmc, nbar, c.tol, c.n_trunc);
    const double x_pssv = states::solve_parameter_for_energy(states::Family::kPssv, nbar, c.tol, c.n_trunc);
    const std::vector<std::pair<std::string, std::pair<double, PnesState>>> family = {
        {"opt", {opt.lambda, opt.state}},
        {"tmsv", {r, states::tmsv(r, c.n_trunc)}},
        {"tmc", {x_tmc, states::tmc(x_tmc, c.n_trunc)}},
        {"pssv", {x_pssv, states::pssv(x_pssv, c.n_trunc)}},
    };
    std::vector<std::vector<double>> dist;
    for (const auto& [name, entry] : family) dist.push_back(states::photon_distribution(entry.second));
    for (std::size_t j = 0; j <= c.n_trunc; ++j) {
      std::vector<Value> row = {nbar, idx(0), idx(c.n_trunc), idx(j)};
      for (const auto& p : dist) row.emplace_back(j < p.size() ? p[j] : 0.0);
      rows.add_row(std::move(row));
    }
    for (const auto& [name, entry] : family) {
      const auto& s = entry.second;
      summary.add_row({nbar, name, entry.first, states::mean_photon(s).n_av, fidelity_pure(s),
                       states::mandel_q(s), states::entanglement_entropy(s) * entropy_scale});
    }
  }
  res.report.rows = std::move(rows);
  res.report.summary = std::move(summary);
  return res;
}

CommandResult cmd_loss(const RunConfig& c) {
  const auto grid = linspace(c.eta_min, c.eta_max, c.eta_steps);
  const loss::LossOptions options;
  CommandResult res;
  res.report.command = "loss";
  res.report.config = {{"n_trunc", idx(c.n_trunc)},   {"family", c.family},
                       {"eta_min", c.eta_min},        {"eta_max", c.eta_max},
                       {"eta_steps", idx(c.eta_steps)}, {"tol", c.tol}};
  if (c.nbar_list) res.report.config.emplace_back("nbar", join(*c.nbar_list));
  if (c.family == "raw") {
    res.report.config.emplace_back("d", idx(c.d_list->front()));
    res.report.config.emplace_back("coeffs", join(c.coeffs));
  }
  res.report.metadata = reference_metadata();
  res.report.metadata.emplace_back("k_cap", idx(options.k_cap));
  res.report.metadata.emplace_back("residual_tolerance", options.residual_tolerance);

  struct Curve {
    double nbar;
    PnesState state;
  };
  std::vector<Curve> curves;
  if (c.family == "raw") {
    CoeffVector v(static_cast<Eigen::Index>(c.coeffs.size()));
    for (std::size_t i = 0; i < c.coeffs.size(); ++i) v(static_cast<Eigen::Index>(i)) = c.coeffs[i];
    auto s = states::raw(c.d_list->front(), v);
    curves.push_back({states::mean_photon(s).n_av, std::move(s)});
  } else {
    for (double nbar : *c.nbar_list) curves.push_back({nbar, family_state(c.family, nbar, c)});
  }

  Table rows({"nbar", "d", "n_trunc", "family", "eta", "f_pnes", "f_tmsv", "delta"});
  Table summary({"nbar", "family", "eta_star", "delta_at_unity", "note"});
  for (const auto& curve : curves) {
    if (!(curve.nbar > 0.0)) throw std::domain_error("loss: candidate state carries no photons");
    const auto reference = states::tmsv(gaussian::energy_to_squeezing(curve.nbar), c.n_trunc);
    for (const auto& row : loss::delta_curve(curve.state, reference, grid, options, c.threads)) {
      rows.add_row({curve.nbar, idx(curve.state.offset()), idx(curve.state.n_trunc()), c.family, row.eta,
                    row.f_candidate, row.f_reference, row.delta});
    }
    const auto cross = loss::crossover_transmittance(curve.state, reference, 1e-4, options);
    summary.add_row({curve.nbar, c.family, cross.eta_star.value_or(kNan), cross.delta_at_unity, cross.note});
  }
  res.report.rows = std::move(rows);
  res.report.summary = std::move(summary);
  return res;
}

CommandResult cmd_verify(const RunConfig& c) {
  std::vector<Check> checks;
  const bool all = c.suite == "all";
  if (all || c.suite == "oracle") oracle_suite(c, checks);
  if (all || c.suite == "binomial") binomial_suite(checks);
  if (all || c.suite == "gaussian") gaussian_suite(c, checks);

  CommandResult res;
  res.report.command = "verify";
  res.report.config = {{"n_trunc", idx(c.n_trunc)}, {"suite", c.suite}};
  res.report.metadata = reference_metadata();
  Table t({"suite", "check", "cases", "worst_residual", "tolerance", "passed", "worst_case"});
  for (const auto& ch : checks) {
    const std::string where = ch.error.empty() ? ch.worst_case : "error: " + ch.error;
    t.add_row({ch.suite, ch.name, idx(ch.cases), ch.worst, ch.tolerance, ch.passed(), where});
    if (!ch.passed() && res.ok) {
      res.ok = false;
      res.failure = ch.suite + "/" + ch.name + " failed at " + where;
    }
  }
  res.report.rows = std::move(t);
  return res;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::string d_text;
  std::string format = "csv";
  std::string output;

  CLI::App app{"Teleportation fidelity of photon-number entangled resource states", "cvtele"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--trunc", config.n_trunc, "Fock cutoff n_trunc")->capture_default_str();
    sub->add_option("--output", output, "Write the table here instead of stdout");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--threads", config.threads, "Worker threads, 0 for all cores")->capture_default_str();
    sub->add_option("--tol", config.tol, "Energy-matching tolerance")->capture_default_str();
  };
  const auto d_option = [&](CLI::App* sub, const std::string& help) {
    sub->add_option("--d", d_text, help);
  };
  const auto nbar_option = [&](CLI::App* sub) {
    sub->add_option_function<std::vector<double>>(
           "--nbar", [&](const std::vector<double>& v) { config.nbar_list = v; }, "Mean photon numbers")
        ->delimiter(',');
  };

  auto* pd = app.add_subcommand("pd-check", "Minimum eigenvalues of f^(0) - f^(d)");
  common(pd);
  d_option(pd, "Sectors, e.g. 1-40 (default)");

  auto* fr = app.add_subcommand("frontier", "Optimal fidelity against energy");
  common(fr);
  d_option(fr, "Sectors (default 0)");
  nbar_option(fr);
  fr->add_option("--lambda-min", config.lambda_min)->capture_default_str();
  fr->add_option("--lambda-max", config.lambda_max)->capture_default_str();
  fr->add_option("--lambda-steps", config.lambda_steps)->capture_default_str();
  fr->add_option("--constraint", config.constraint, "n_av or n_a")
      ->check(CLI::IsMember({"n_av", "n_a"}))
      ->capture_default_str();

  auto* st = app.add_subcommand("states", "Photon statistics of the resource families");
  common(st);
  nbar_option(st);
  st->add_flag("--bits", config.bits, "Entropy in bits");

  auto* ls = app.add_subcommand("loss", "Fidelity under symmetric pure loss");
  common(ls);
  nbar_option(ls);
  d_option(ls, "Sector of --family raw");
  ls->add_option("--eta-min", config.eta_min)->capture_default_str();
  ls->add_option("--eta-max", config.eta_max)->capture_default_str();
  ls->add_option("--eta-steps", config.eta_steps)->capture_default_str();
  ls->add_option("--family", config.family, "opt, tmsv, tmc, pssv or raw")->capture_default_str();
  ls->add_option("--coeffs", config.coeffs, "Coefficients for --family raw")->delimiter(',');

  auto* vf = app.add_subcommand("verify", "Cross-check against independent reconstructions");
  common(vf);
  vf->add_option("--suite", config.suite, "oracle, binomial, gaussian or all")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "cvtele: error: " << e.what() << '\n';
    return kExitUsage;
  }

  for (auto* sub : app.get_subcommands()) config.subcommand = sub->get_name();
  try {
    config.format = io::parse_format(format);
    const auto* d_opt = app.get_subcommands().front()->get_option_no_throw("--d");
    if (d_opt != nullptr && d_opt->count() > 0) {
      config.d_list = parse_index_list(d_text);
    }
    if (!output.empty()) config.output = output;
    validate(config);
  } catch (const std::exception& e) {
    err << "cvtele: error: " << e.what() << '\n';
    return kExitUsage;
  }

  CommandResult result;
  try {
    if (config.subcommand == "pd-check") {
      result = cmd_pd_check(config);
    } else if (config.subcommand == "frontier") {
      result = cmd_frontier(config);
    } else if (config.subcommand == "states") {
      result = cmd_states(config);
    } else if (config.subcommand == "loss") {
      result = cmd_loss(config);
    } else {
      result = cmd_verify(config);
    }
  } catch (const std::exception& e) {
    err << "cvtele: error: " << config.subcommand << ": " << e.what() << '\n';
    return kExitFailure;
  }

  if (config.output) {
    std::ofstream file(*config.output);
    if (!file) {
      err << "cvtele: error: cannot open " << *config.output << " for writing\n";
      return kExitFailure;
    }
    io::write_report(result.report, config.format, file);
    if (!file) {
      err << "cvtele: error: write to " << *config.output << " failed\n";
      return kExitFailure;
    }
  } else {
    io::write_report(result.report, config.format, out);
  }
  if (!result.ok) {
    err << "cvtele: " << config.subcommand << ": " << result.failure << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace cvtele::cli
