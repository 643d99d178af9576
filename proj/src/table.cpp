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

#include "cvtele/table.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace cvtele::io {

namespace {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

nlohmann::ordered_json to_json(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) {
    if (!std::isfinite(*d)) return nullptr;
    // Round through the printed form so CSV and JSON carry the same digits.
    return std::stod(format_double(*d));
  }
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  return std::get<std::string>(v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void write_table_csv(const Table& t, std::ostream& out) {
  for (std::size_t i = 0; i < t.columns().size(); ++i) {
    out << (i ? "," : "") << t.columns()[i];
  }
  out << '\n';
  for (const auto& row : t.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << csv_field(format_value(row[i]));
    }
    out << '\n';
  }
}

nlohmann::ordered_json table_json(const Table& t) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows()) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns()[i]] = to_json(row[i]);
    arr.push_back(std::move(obj));
  }
  return arr;
}

nlohmann::ordered_json kv_json(const KeyValues& kv) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const auto& [k, v] : kv) obj[k] = to_json(v);
  return obj;
}

}  // namespace

std::string format_value(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return std::get<std::string>(v);
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<Value> row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("Table::add_row: expected " + std::to_string(columns_.size()) +
                                " fields, got " + std::to_string(row.size()));
  }
  rows_.push_back(std::move(row));
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw std::invalid_argument("unknown format '" + name + "' (expected csv or json)");
}

void write_csv(const Report& report, std::ostream& out) {
  out << "# command=" << report.command << '\n';
  for (const auto& [k, v] : report.config) out << "# " << k << '=' << format_value(v) << '\n';
  for (const auto& [k, v] : report.metadata) out << "# " << k << '=' << format_value(v) << '\n';
  write_table_csv(report.rows, out);
  if (!report.summary.empty()) {
    out << "# summary\n";
    write_table_csv(report.summary, out);
  }
}

void write_json(const Report& report, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["command"] = report.command;
  doc["config"] = kv_json(report.config);
  doc["metadata"] = kv_json(report.metadata);
  doc["rows"] = table_json(report.rows);
  doc["summary"] = table_json(report.summary);
  out << doc.dump(2) << '\n';
}

void write_report(const Report& report, Format format, std::ostream& out) {
  if (format == Format::kJson) {
    write_json(report, out);
  } else {
    write_csv(report, out);
  }
}

}  // namespace cvtele::io
