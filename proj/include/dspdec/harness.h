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

#ifndef DSPDEC_HARNESS_H
#define DSPDEC_HARNESS_H

#include <cstdint>
#include <string>
#include <vector>

#include "dspdec/experiments.h"

namespace dspdec {

inline constexpr char kArtifactVersion[] = "1.0.0";

// ---------------------------------------------------------------------------
// Configuration files.
//
// A config is a JSON object with keys
//   mode            (required)  experiment mode name
//   decomposition   (required)  literal "J=[(l1,r1),(l2,r2),...]"
//   state           state spec; defaults to "random" for nonrandomized-pd and
//                   "random-classically-coherent" for the randomized modes
//   state_seed      default 1
//   reference_dim   default 2
//   channel         channel preset text, default "identity"
//   samples         default 2000
//   seed            default 0
//   conditioner     "optimal" (default) | "uniform"
// Unknown keys are schema violations.  Parsing validates the config, so
// structural constraints (CC1, CC2, ...) are reported at parse time.

// Parses config text; std::invalid_argument diagnostics carry the violating
// field name, or line/column for malformed JSON.
ExperimentConfig parse_config_text(const std::string& text);

// Reads and parses a config file; I/O failures name the path.
ExperimentConfig parse_config(const std::string& path);

// Canonical serialization: sorted keys, two-space indent, trailing newline.
// parse_config_text(canonical_config_text(c)) == c for every valid c.
std::string canonical_config_text(const ExperimentConfig& config);

// FNV-1a 64-bit digest of the canonical config text.
std::uint64_t config_hash(const ExperimentConfig& config);

// A suite file is either a JSON array of config objects or an object whose
// "experiments" key holds one.
std::vector<ExperimentConfig> parse_suite_text(const std::string& text);
std::vector<ExperimentConfig> parse_suite(const std::string& path);

// ---------------------------------------------------------------------------
// Report persistence.
//
// One experiment report is one self-describing JSON line: every numeric field
// carries its name, and serialization is canonical (sorted keys, shortest
// round-trip numbers), so identical (config, seed) runs produce byte-identical
// payloads.  Wall time and timestamps live only in the manifest.

std::string report_to_json_line(const ExperimentReport& report);
ExperimentReport report_from_json_line(const std::string& line);

struct RunManifest {
  std::string config_hash;  // 16 hex digits over the canonical suite text
  std::uint64_t seed = 0;   // seed of the first experiment
  std::string timestamp_utc;
  std::string artifact_version;
  std::vector<std::string> report_paths;
  double wall_seconds = 0.0;
};

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// Orchestration.

struct RunResult {
  RunManifest manifest;
  std::vector<ExperimentReport> reports;
  std::string manifest_path;
  bool all_margins_nonnegative = true;
};

// Runs every config in order, writing out_dir/report-NNN.json (one JSON line
// each) and out_dir/manifest.json.  The directory is created if needed; I/O
// failures name the offending path.
RunResult run(const std::vector<ExperimentConfig>& configs,
              const std::string& out_dir,
              const Tolerances& tol = default_tolerances());

// Long-form CSV view of a manifest's reports for external plotting: header
//   mode,J,r,N,lhs_mean,lhs_stderr,rhs_total,margin
// with rows sorted by (mode, J, r) and numeric fields in full-precision
// scientific notation.  An empty manifest yields a header-only file;
// re-emitting is idempotent.
void emit_plot_data(const std::string& manifest_path,
                    const std::string& csv_path);

}  // namespace dspdec

#endif  // DSPDEC_HARNESS_H
