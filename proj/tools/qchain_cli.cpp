// Copyright 2026 The qchain Authors
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

// qchain command line: run / preset / verify.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 numerical
// failure (including any failed acceptance criterion).

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qchain/experiments.hpp"
#include "qchain/testing/acceptance.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

int emit(const qchain::ExperimentConfig& cfg) {
  const auto records = qchain::run_preset(cfg);
  if (cfg.output_path.empty()) {
    std::cout << qchain::format_csv(records);
  } else {
    qchain::write_csv(records, cfg.output_path);
    std::cerr << "wrote " << records.size() << " records to " << cfg.output_path << '\n';
  }
  return 0;
}

int verify() {
  bool all = true;
  for (const auto& criterion : qchain::acceptance::all_criteria()) {
    const auto r = criterion();
    std::cout << qchain::acceptance::format_line(r) << std::endl;
    all = all && r.passed;
  }
  std::cout << (all ? "all criteria passed" : "some criteria FAILED") << std::endl;
  return all ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qchain: Lindblad simulator for engineered-reservoir qubit chains"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("--config", config_path, "JSON config file")->required();

  std::string preset_name;
  std::optional<int> n_max;
  std::optional<double> gamma, gamma_engineered, kappa, t_max;
  std::string out_path;
  auto* preset = app.add_subcommand("preset", "run a named preset (two_qubit, fig2a, fig2b, fig2c, fig3a, fig3b)");
  preset->add_option("name", preset_name, "preset name")->required();
  preset->add_option("--n-max", n_max, "chain length, or the largest n of a sweep");
  preset->add_option("--gamma", gamma, "dephasing rate on the primary qubits (geometry B)");
  preset->add_option("--gamma-engineered", gamma_engineered, "engineered bi-local decay rate");
  preset->add_option("--kappa", kappa, "coherent coupling; sets kappa and theta");
  preset->add_option("--t-max", t_max, "evolution horizon (0: default)");
  preset->add_option("--out", out_path, "CSV output path (default: stdout)");

  app.add_subcommand("verify", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  qchain::ExperimentConfig cfg;
  try {
    if (run->parsed()) {
      cfg = qchain::load_config(config_path);
    } else if (preset->parsed()) {
      cfg = qchain::preset_defaults(qchain::parse_preset(preset_name));
      if (n_max) {
        if (cfg.is_sweep()) {
          const int lo = cfg.n_list.empty() ? 4 : cfg.n_list.front();
          cfg.n_list = qchain::even_range(lo, *n_max);
        } else {
          cfg.chain.n = *n_max;
        }
      }
      if (gamma) cfg.chain.gamma_dephasing = *gamma;
      if (gamma_engineered) cfg.chain.gamma_engineered = *gamma_engineered;
      if (kappa) cfg.chain.kappa = cfg.chain.theta = *kappa;
      if (t_max) cfg.t_max = *t_max;
      cfg.output_path = out_path;
      cfg.validate();
    } else {
      return verify();
    }
  } catch (const std::exception& e) {
    std::cerr << "qchain: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    return emit(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "qchain: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "qchain: " << e.what() << '\n';
    return kExitNumerical;
  }
}
