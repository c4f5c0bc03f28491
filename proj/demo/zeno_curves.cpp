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

// Prints a few points of the absorption, discrimination and SNR curves, then
// reconstructs one partial polarizer from simulated coincidences.

#include <cstdio>

#include "ifp/ifp.hpp"

int main() {
  std::printf("%5s %10s %12s %8s %8s\n", "n", "P_abs(p=1)", "signal(p=1)", "f", "g");
  for (int n : {1, 2, 4, 10, 30, 100}) {
    const ifp::RunOutcome blocked = ifp::run_protocol({n, 1.0});
    std::printf("%5d %10.4f %12.4f %8.4f %8.4f\n", n, blocked.p_abs, blocked.discrimination(),
                ifp::f_factor(n), ifp::g_factor(n));
  }

  ifp::ScenarioConfig cfg;
  cfg.sample = ifp::SampleModel(1, 1, ifp::Diattenuator(0.5, 0.6, 0.0, 0.0));
  cfg.n = 20;
  cfg.pairs_per_mode = 1e5;
  cfg.seed = 1;
  const ifp::ReconstructionResult r = ifp::reconstruct_image(ifp::simulate_heralded_run(cfg), cfg);
  const ifp::DiattenuatorEstimate& e = r.at(0, 0).estimate;
  std::printf("\ntrue tau 0.5 d (0.6, 0, 0)\nest  tau %.4f d (%.4f, %.4f, %.4f)\n", e.tau, e.d[0],
              e.d[1], e.d[2]);
  return 0;
}
