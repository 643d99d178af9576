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

#ifndef CVTELE_CLI_HPP
#define CVTELE_CLI_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <ostream>
#include <string>
#include <vector>

#include "cvtele/table.hpp"

namespace cvtele::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Raised for configurations rejected before any computation runs.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string subcommand;
  std::size_t n_trunc = 100;
  std::optional<std::vector<std::size_t>> d_list;
  double lambda_min = 1e-4;
  double lambda_max = 2.0;
  std::size_t lambda_steps = 200;
  std::optional<std::vector<double>> nbar_list;
  double eta_min = 0.5;
  double eta_max = 1.0;
  std::size_t eta_steps = 51;
  std::string family = "opt";
  std::vector<double> coeffs;
  std::string constraint = "n_av";
  std::string suite = "all";
  bool bits = false;
  std::optional<std::string> output;
  io::Format format = io::Format::kCsv;
  double tol = 1e-10;
  unsigned threads = 1;
};

/// "1,3,5-8" style lists. Throws UsageError on empty or malformed input.
std::vector<std::size_t> parse_index_list(const std::string& text);

/// Fills command-specific defaults and checks every numeric field.
/// Throws UsageError.
void validate(RunConfig& config);

struct CommandResult {
  io::Report report;
  bool ok = true;
  std::string failure;  // first failing item when !ok
};

CommandResult cmd_pd_check(const RunConfig& config);
CommandResult cmd_frontier(const RunConfig& config);
CommandResult cmd_states(const RunConfig& config);
CommandResult cmd_loss(const RunConfig& config);
CommandResult cmd_verify(const RunConfig& config);

/// Parses argv, runs the subcommand and writes the report to `out` or to
/// --output. Returns kExitOk, kExitFailure or kExitUsage.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cvtele::cli

#endif  // CVTELE_CLI_HPP
