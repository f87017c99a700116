// SPDX-License-Identifier: Apache-2.0
//
// cfmimo: hybrid beamforming and adaptive RF chain activation for uplink
// cell-free mmWave massive MIMO
// Copyright (C) 2026 The cfmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Batch driver: runs an experiment plan and writes one metrics row per
// (scheme, sweep point, trial).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "cfmimo/experiments.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

std::vector<cfmimo::Scheme> parse_scheme_list(const std::string& text) {
  std::vector<cfmimo::Scheme> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(cfmimo::parse_scheme(item));
  }
  if (out.empty()) throw cfmimo::ConfigError("--scheme: no scheme names given");
  return out;
}

template <typename Writer>
void write_to(const std::string& path, Writer&& writer) {
  if (path.empty() || path == "-") {
    writer(std::cout);
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("failed writing to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  writer(out);
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte-Carlo runner for hybrid beamforming and RF chain activation schemes"};
  std::string config_path, schemes, sweep, out_path, format, summary_path;
  int trials = -1;
  std::uint64_t seed = 0;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool echo = false;

  app.add_option("--config", config_path, "JSON plan file")->required();
  app.add_option("--scheme", schemes, "Comma-separated scheme names");
  app.add_option("--sweep", sweep, "VAR=start:step:stop or VAR=v1,v2 with VAR in {rho, L, nbar}");
  app.add_option("--trials", trials, "Trials per sweep point");
  auto* seed_opt = app.add_option("--seed", seed, "Master seed");
  app.add_option("--out", out_path, "Output file ('-' for standard output)");
  app.add_option("--format", format, "csv or json");
  app.add_option("--workers", workers, "Worker threads (output does not depend on it)")
      ->check(CLI::PositiveNumber);
  app.add_option("--summary", summary_path, "Also write per-scheme aggregates as CSV");
  app.add_flag("--echo-config", echo, "Print the resolved plan as JSON and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  cfmimo::ExperimentPlan plan;
  try {
    plan = cfmimo::load_plan(config_path);
    if (!schemes.empty()) plan.schemes = parse_scheme_list(schemes);
    if (!sweep.empty()) plan.sweep = cfmimo::parse_sweep_spec(sweep);
    if (trials >= 0) plan.scenario.trials = trials;
    if (seed_opt->count() > 0) plan.scenario.master_seed = seed;
    if (!out_path.empty()) plan.out_path = out_path;
    if (!format.empty()) {
      if (format == "csv") plan.format = cfmimo::OutputFormat::Csv;
      else if (format == "json") plan.format = cfmimo::OutputFormat::Json;
      else throw cfmimo::ConfigError("--format: expected csv or json");
    }
    plan.validate();
  } catch (const cfmimo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  if (echo) {
    std::cout << cfmimo::echo_plan(plan);
    return 0;
  }

  try {
    const auto records = cfmimo::run_plan(plan, workers);
    write_to(plan.out_path, [&](std::ostream& os) {
      if (plan.format == cfmimo::OutputFormat::Csv) cfmimo::write_csv(os, records);
      else cfmimo::write_json(os, records);
    });
    if (!summary_path.empty()) {
      const auto rows = cfmimo::summarize(records);
      write_to(summary_path, [&](std::ostream& os) { cfmimo::write_summary_csv(os, rows); });
    }
  } catch (const cfmimo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
