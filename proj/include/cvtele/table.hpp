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

#ifndef CVTELE_TABLE_HPP
#define CVTELE_TABLE_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cvtele::io {

using Value = std::variant<bool, std::int64_t, double, std::string>;
using KeyValues = std::vector<std::pair<std::string, Value>>;

/// Doubles at 12 significant digits, booleans as true/false.
std::string format_value(const Value& v);

class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  /// Throws std::invalid_argument on a width mismatch.
  void add_row(std::vector<Value> row);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Value>>& rows() const noexcept { return rows_; }
  bool empty() const noexcept { return rows_.empty(); }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Value>> rows_;
};

struct Report {
  std::string command;
  KeyValues config;
  KeyValues metadata;
  Table rows{{}};
  Table summary{{}};
};

enum class Format { kCsv, kJson };

Format parse_format(const std::string& name);

/// CSV: "# key=value" lines for the command, config and metadata, then the
/// row table, then "# summary" and the summary table when it has rows.
void write_csv(const Report& report, std::ostream& out);

/// {"command", "config", "metadata", "rows": [...], "summary": [...]}.
/// Non-finite doubles become null.
void write_json(const Report& report, std::ostream& out);

void write_report(const Report& report, Format format, std::ostream& out);

}  // namespace cvtele::io

#endif  // CVTELE_TABLE_HPP
