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
//
// Command-line front end.
//
//   dspdec verify --config <path> [--seed u64] [--samples N] [--out dir]
//   dspdec sweep --suite <path> [--out dir]
//   dspdec plot-data --manifest <path> --out <csv>
//
// DSPDEC_SEED and DSPDEC_SAMPLES override the config; explicit flags override
// the environment.  Exit codes: 0 all margins nonnegative after retry,
// 1 some margin negative, 2 configuration error, 3 numerical failure.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dspdec/harness.h"

namespace {

constexpr int kExitMarginViolated = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalFailure = 3;

std::optional<std::uint64_t> env_u64(const char* name) {
  const char* text = std::getenv(name);
  if (text == nullptr || *text == '\0') {
    return std::nullopt;
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(name) +
                                " must be an unsigned integer");
  }
}

// Flags win over environment variables, which win over the config file.
void apply_overrides(dspdec::ExperimentConfig& config,
                     const std::optional<std::uint64_t>& seed_flag,
                     const std::optional<std::uint64_t>& samples_flag) {
  const auto seed = seed_flag.has_value() ? seed_flag : env_u64("DSPDEC_SEED");
  const auto samples =
      samples_flag.has_value() ? samples_flag : env_u64("DSPDEC_SAMPLES");
  if (seed.has_value()) {
    config.seed = *seed;
  }
  if (samples.has_value()) {
    config.samples = static_cast<dspdec::Index>(*samples);
  }
  dspdec::validate(config);
}

void print_reports(const dspdec::RunResult& result) {
  for (const dspdec::ExperimentReport& report : result.reports) {
    std::cout << report.mode << " " << report.decomposition
              << " N=" << report.samples << " lhs=" << report.lhs_mean
              << " rhs=" << report.rhs_total << " margin=" << report.margin
              << (report.retried ? " (retried)" : "") << "\n";
  }
  std::cout << "manifest: " << result.manifest_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"one-shot partial decoupling verifier"};
  app.require_subcommand(1);

  std::string config_path;
  std::string suite_path;
  std::string manifest_path;
  std::string out_dir = "runs";
  std::string csv_path;
  std::optional<std::uint64_t> seed_flag;
  std::optional<std::uint64_t> samples_flag;

  CLI::App* verify = app.add_subcommand("verify", "run one experiment config");
  verify->add_option("--config", config_path, "config file path")->required();
  verify->add_option("--seed", seed_flag, "override the sampling seed");
  verify->add_option("--samples", samples_flag, "override the sample count");
  verify->add_option("--out", out_dir, "output directory");

  CLI::App* sweep = app.add_subcommand("sweep", "run a suite of configs");
  sweep->add_option("--suite", suite_path, "suite file path")->required();
  sweep->add_option("--out", out_dir, "output directory");

  CLI::App* plot =
      app.add_subcommand("plot-data", "emit a CSV view of a manifest");
  plot->add_option("--manifest", manifest_path, "manifest file path")
      ->required();
  plot->add_option("--out", csv_path, "CSV output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      dspdec::ExperimentConfig config = dspdec::parse_config(config_path);
      apply_overrides(config, seed_flag, samples_flag);
      const dspdec::RunResult result = dspdec::run({config}, out_dir);
      print_reports(result);
      return result.all_margins_nonnegative ? 0 : kExitMarginViolated;
    }
    if (sweep->parsed()) {
      const std::vector<dspdec::ExperimentConfig> configs =
          dspdec::parse_suite(suite_path);
      const dspdec::RunResult result = dspdec::run(configs, out_dir);
      print_reports(result);
      return result.all_margins_nonnegative ? 0 : kExitMarginViolated;
    }
    dspdec::emit_plot_data(manifest_path, csv_path);
    std::cout << "wrote " << csv_path << "\n";
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
}
