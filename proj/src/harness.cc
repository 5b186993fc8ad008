// Copyright 2026 The dspdec developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dspdec/harness.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "json.hpp"

namespace dspdec {

namespace {

using json = nlohmann::json;

// Byte offset -> 1-based line:column for parse diagnostics.
std::pair<std::size_t, std::size_t> line_column(const std::string& text,
                                                std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json parse_json_with_diagnostics(const std::string& text,
                                 const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte position of the failure.
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::ostringstream msg;
    msg << what << ": malformed JSON at line " << line << ", column " << column
        << ": " << e.what();
    throw std::invalid_argument(msg.str());
  }
}

[[noreturn]] void field_error(const std::string& field,
                              const std::string& detail) {
  throw std::invalid_argument("config field '" + field + "': " + detail);
}

std::string get_string(const json& object, const std::string& field,
                       const std::string& fallback) {
  if (!object.contains(field)) {
    return fallback;
  }
  if (!object.at(field).is_string()) {
    field_error(field, "expected a string");
  }
  return object.at(field).get<std::string>();
}

Index get_index(const json& object, const std::string& field, Index fallback) {
  if (!object.contains(field)) {
    return fallback;
  }
  const json& value = object.at(field);
  if (!value.is_number_integer() || value.is_number_float()) {
    field_error(field, "expected an integer");
  }
  const std::int64_t parsed = value.get<std::int64_t>();
  if (parsed < 0) {
    field_error(field, "expected a nonnegative integer");
  }
  return static_cast<Index>(parsed);
}

std::uint64_t get_seed(const json& object, const std::string& field,
                       std::uint64_t fallback) {
  if (!object.contains(field)) {
    return fallback;
  }
  const json& value = object.at(field);
  if (!value.is_number_unsigned() && !value.is_number_integer()) {
    field_error(field, "expected an unsigned integer");
  }
  if (value.is_number_integer() && value.get<std::int64_t>() < 0) {
    field_error(field, "expected an unsigned integer");
  }
  return value.get<std::uint64_t>();
}

ExperimentConfig config_from_json(const json& object) {
  if (!object.is_object()) {
    throw std::invalid_argument("config must be a JSON object");
  }
  static const char* kKnown[] = {"mode",          "decomposition", "state",
                                 "state_seed",    "reference_dim", "channel",
                                 "samples",       "seed",          "conditioner"};
  for (const auto& item : object.items()) {
    bool known = false;
    for (const char* key : kKnown) {
      known = known || item.key() == key;
    }
    if (!known) {
      field_error(item.key(), "unknown field");
    }
  }

  ExperimentConfig config;
  if (!object.contains("mode")) {
    field_error("mode", "required");
  }
  const std::string mode_text = get_string(object, "mode", "");
  const auto mode = mode_from_name(mode_text);
  if (!mode.has_value()) {
    field_error("mode", "unknown mode '" + mode_text + "'");
  }
  config.mode = *mode;

  if (!object.contains("decomposition")) {
    field_error("decomposition", "required");
  }
  try {
    config.decomp =
        DspDecomposition::from_literal(get_string(object, "decomposition", ""));
  } catch (const std::invalid_argument& e) {
    field_error("decomposition", e.what());
  }

  const std::string default_state = config.mode == ExperimentMode::kNonrandomizedPd
                                        ? "random"
                                        : "random-classically-coherent";
  config.state = get_string(object, "state", default_state);
  config.state_seed = get_seed(object, "state_seed", 1);
  config.reference_dim = get_index(object, "reference_dim", 2);
  config.channel = get_string(object, "channel", "identity");
  config.samples = get_index(object, "samples", 2000);
  config.seed = get_seed(object, "seed", 0);
  config.conditioner = get_string(object, "conditioner", "optimal");

  validate(config);
  return config;
}

json config_to_json(const ExperimentConfig& config) {
  json object;
  object["mode"] = mode_name(config.mode);
  object["decomposition"] = config.decomp.to_literal();
  object["state"] = config.state;
  object["state_seed"] = config.state_seed;
  object["reference_dim"] = config.reference_dim;
  object["channel"] = config.channel;
  object["samples"] = config.samples;
  object["seed"] = config.seed;
  object["conditioner"] = config.conditioner;
  return object;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("cannot open file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open file for writing: " + path);
  }
  out << content;
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    hash ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(value));
  return buffer;
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buffer;
}

std::string scientific(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17e", value);
  return buffer;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configs.

ExperimentConfig parse_config_text(const std::string& text) {
  return config_from_json(parse_json_with_diagnostics(text, "config"));
}

ExperimentConfig parse_config(const std::string& path) {
  return parse_config_text(read_file(path));
}

std::string canonical_config_text(const ExperimentConfig& config) {
  // nlohmann objects iterate in sorted key order, so dump() is canonical.
  return config_to_json(config).dump(2) + "\n";
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  return fnv1a64(canonical_config_text(config));
}

std::vector<ExperimentConfig> parse_suite_text(const std::string& text) {
  const json parsed = parse_json_with_diagnostics(text, "suite");
  const json* list = &parsed;
  if (parsed.is_object()) {
    if (!parsed.contains("experiments")) {
      throw std::invalid_argument(
          "suite object must carry an 'experiments' array");
    }
    list = &parsed.at("experiments");
  }
  if (!list->is_array()) {
    throw std::invalid_argument("suite must be a JSON array of configs");
  }
  std::vector<ExperimentConfig> configs;
  configs.reserve(list->size());
  for (std::size_t i = 0; i < list->size(); ++i) {
    try {
      configs.push_back(config_from_json(list->at(i)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("suite entry " + std::to_string(i) + ": " +
                                  e.what());
    }
  }
  return configs;
}

std::vector<ExperimentConfig> parse_suite(const std::string& path) {
  return parse_suite_text(read_file(path));
}

// ---------------------------------------------------------------------------
// Reports.

std::string report_to_json_line(const ExperimentReport& report) {
  json object;
  object["mode"] = report.mode;
  object["decomposition"] = report.decomposition;
  object["block_count"] = report.block_count;
  object["right_dim"] = report.right_dim;
  object["reference_dim"] = report.reference_dim;
  object["env_dim"] = report.env_dim;
  object["samples"] = report.samples;
  object["seed"] = report.seed;
  object["lhs_mean"] = report.lhs_mean;
  object["lhs_stderr"] = report.lhs_stderr;
  json terms = json::array();
  for (const RhsTerm& term : report.rhs_terms) {
    terms.push_back({{"name", term.name}, {"value", term.value}});
  }
  object["rhs_terms"] = std::move(terms);
  object["rhs_total"] = report.rhs_total;
  object["margin"] = report.margin;
  object["retried"] = report.retried;
  return object.dump();
}

ExperimentReport report_from_json_line(const std::string& line) {
  const json object = parse_json_with_diagnostics(line, "report");
  ExperimentReport report;
  report.mode = object.at("mode").get<std::string>();
  report.decomposition = object.at("decomposition").get<std::string>();
  report.block_count = object.at("block_count").get<Index>();
  report.right_dim = object.at("right_dim").get<Index>();
  report.reference_dim = object.at("reference_dim").get<Index>();
  report.env_dim = object.at("env_dim").get<Index>();
  report.samples = object.at("samples").get<Index>();
  report.seed = object.at("seed").get<std::uint64_t>();
  report.lhs_mean = object.at("lhs_mean").get<double>();
  report.lhs_stderr = object.at("lhs_stderr").get<double>();
  for (const json& term : object.at("rhs_terms")) {
    report.rhs_terms.push_back(
        {term.at("name").get<std::string>(), term.at("value").get<double>()});
  }
  report.rhs_total = object.at("rhs_total").get<double>();
  report.margin = object.at("margin").get<double>();
  report.retried = object.at("retried").get<bool>();
  return report;
}

std::string manifest_to_json(const RunManifest& manifest) {
  json object;
  object["config_hash"] = manifest.config_hash;
  object["seed"] = manifest.seed;
  object["timestamp_utc"] = manifest.timestamp_utc;
  object["artifact_version"] = manifest.artifact_version;
  object["report_paths"] = manifest.report_paths;
  object["wall_seconds"] = manifest.wall_seconds;
  return object.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  const json object = parse_json_with_diagnostics(text, "manifest");
  RunManifest manifest;
  manifest.config_hash = object.at("config_hash").get<std::string>();
  manifest.seed = object.at("seed").get<std::uint64_t>();
  manifest.timestamp_utc = object.at("timestamp_utc").get<std::string>();
  manifest.artifact_version = object.at("artifact_version").get<std::string>();
  manifest.report_paths =
      object.at("report_paths").get<std::vector<std::string>>();
  manifest.wall_seconds = object.at("wall_seconds").get<double>();
  return manifest;
}

// ---------------------------------------------------------------------------
// Orchestration.

RunResult run(const std::vector<ExperimentConfig>& configs,
              const std::string& out_dir, const Tolerances& tol) {
  const auto start = std::chrono::steady_clock::now();
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory: " + out_dir);
  }

  RunResult result;
  std::string suite_text;
  for (const ExperimentConfig& config : configs) {
    suite_text += canonical_config_text(config);
  }
  result.manifest.config_hash = hex64(fnv1a64(suite_text));
  result.manifest.seed = configs.empty() ? 0 : configs.front().seed;
  result.manifest.timestamp_utc = utc_timestamp();
  result.manifest.artifact_version = kArtifactVersion;

  for (std::size_t i = 0; i < configs.size(); ++i) {
    const ExperimentReport report = run_experiment(configs[i], tol);
    char name[32];
    std::snprintf(name, sizeof(name), "report-%03zu.json", i);
    const std::string path = (fs::path(out_dir) / name).string();
    write_file(path, report_to_json_line(report) + "\n");
    result.manifest.report_paths.push_back(path);
    result.all_margins_nonnegative =
        result.all_margins_nonnegative && report.margin >= 0.0;
    result.reports.push_back(report);
  }

  result.manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  result.manifest_path = (fs::path(out_dir) / "manifest.json").string();
  write_file(result.manifest_path, manifest_to_json(result.manifest));
  return result;
}

void emit_plot_data(const std::string& manifest_path,
                    const std::string& csv_path) {
  const RunManifest manifest = manifest_from_json(read_file(manifest_path));
  std::vector<ExperimentReport> reports;
  for (const std::string& path : manifest.report_paths) {
    std::string text;
    try {
      text = read_file(path);
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("missing report: " + path);
    }
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      if (!line.empty()) {
        reports.push_back(report_from_json_line(line));
      }
    }
  }
  std::stable_sort(reports.begin(), reports.end(),
                   [](const ExperimentReport& a, const ExperimentReport& b) {
                     return std::tie(a.mode, a.block_count, a.right_dim) <
                            std::tie(b.mode, b.block_count, b.right_dim);
                   });

  std::ostringstream csv;
  csv << "mode,J,r,N,lhs_mean,lhs_stderr,rhs_total,margin\n";
  for (const ExperimentReport& report : reports) {
    csv << report.mode << ',' << report.block_count << ',' << report.right_dim
        << ',' << report.samples << ',' << scientific(report.lhs_mean) << ','
        << scientific(report.lhs_stderr) << ',' << scientific(report.rhs_total)
        << ',' << scientific(report.margin) << '\n';
  }
  write_file(csv_path, csv.str());
}

}  // namespace dspdec
