// Copyright 2026 The ifp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// ifp: interaction-free polarimetry simulator.
//
//   ifp zeno-sweep --n 1..100 --p 0:0.01:1 --variant mixture -o zeno.csv
//   ifp snr-sweep  --n 1..100 --variant mixture -o snr.csv
//   ifp run --config scenario.cfg -o outdir/ [--seed 42] [--heatmaps]
//
// Exit status: 0 success, 1 runtime error, 2 usage or validation error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ifp/commands.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interaction-free polarimetry simulator"};
  app.set_version_flag("--version", std::string(ifp::kVersion));
  app.require_subcommand(1);

  std::string n_text;
  std::string p_text;
  std::string variant_text = "mixture";
  std::string output;

  auto* zeno = app.add_subcommand("zeno-sweep", "Detection/absorption probabilities over (n, p)");
  zeno->add_option("--n", n_text, "Cycle counts, e.g. 1..100 or 1,2,5")->required();
  zeno->add_option("--p", p_text, "Block probabilities, e.g. 0:0.01:1 or 0,0.5,1")->required();
  zeno->add_option("--variant", variant_text, "mixture | damping | runwise | all (comma list)");
  zeno->add_option("-o,--output", output, "CSV output path")->required();

  auto* snr = app.add_subcommand("snr-sweep", "SNR factors f(n), g(n) and mean absorption");
  snr->add_option("--n", n_text, "Cycle counts, e.g. 1..100")->required();
  snr->add_option("--variant", variant_text, "mixture | damping | runwise | all (comma list)");
  snr->add_option("-o,--output", output, "CSV output path")->required();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool heatmaps = false;
  auto* run = app.add_subcommand("run", "Simulate and reconstruct a scenario");
  run->add_option("--config", config_path, "Scenario file")->required();
  run->add_option("-o,--output", output, "Output directory")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_flag("--heatmaps", heatmaps, "Also write SVG heatmaps of the diattenuation maps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (zeno->parsed()) {
      ifp::SweepSpec spec;
      spec.n_values = ifp::parse_int_list(n_text);
      spec.p_values = ifp::parse_real_list(p_text);
      spec.variants = ifp::parse_variant_list(variant_text);
      spec.output = output;
      ifp::cmd_zeno_sweep(spec);
    } else if (snr->parsed()) {
      ifp::cmd_snr_sweep(ifp::parse_int_list(n_text), ifp::parse_variant_list(variant_text),
                         output);
    } else if (run->parsed()) {
      ifp::ScenarioConfig cfg = ifp::load_scenario(config_path);
      if (seed) cfg.seed = *seed;
      const ifp::ScenarioRun result = ifp::run_scenario(cfg, output, heatmaps);
      std::cout << "wrote " << result.files.size() << " files to " << output << " ("
                << result.reconstruction.clipped_modes << " clipped mode estimates)\n";
    }
  } catch (const ifp::UsageError& e) {
    std::cerr << "ifp: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ifp::ParseError& e) {
    std::cerr << "ifp: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ifp::DomainError& e) {
    std::cerr << "ifp: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "ifp: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
