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

/**
 * @file stats.hpp
 * @brief Photon source statistics and signal-to-noise figures of merit.
 *
 * All SNR figures are normalised by sqrt(N), where N is the mean number of
 * photons per polarization-pixel mode. Noise is shot noise: the four detector
 * counts entering the interaction-free signal (D0 and D1, object transparent
 * and object blocking) are treated as independent Poisson variables, so the
 * variance of the signal is the sum of their means.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ifp/errors.hpp"
#include "ifp/rng.hpp"
#include "ifp/zeno.hpp"

namespace ifp {

enum class SourceKind { Poisson, Thermal };

constexpr std::string_view to_string(SourceKind k) {
  return k == SourceKind::Poisson ? "poisson" : "thermal";
}

inline SourceKind parse_source_kind(std::string_view s) {
  if (s == "poisson") return SourceKind::Poisson;
  if (s == "thermal") return SourceKind::Thermal;
  throw DomainError("unknown source kind '" + std::string(s) + "' (expected poisson or thermal)");
}

struct SourceModel {
  SourceKind kind = SourceKind::Poisson;
  double mean = 1.0;

  void validate() const {
    if (!(mean > 0.0)) throw DomainError("source mean must be > 0");
  }
};

/// Photon (pair) number for one acquisition. Poisson, or single-mode
/// Bose-Einstein (geometric on {0, 1, ...}) with the same mean.
template <class Rng>
std::uint64_t sample_photon_number(const SourceModel& src, Rng& rng) {
  src.validate();
  if (src.kind == SourceKind::Poisson) {
    std::poisson_distribution<std::uint64_t> dist(src.mean);
    return dist(rng);
  }
  std::geometric_distribution<std::uint64_t> dist(1.0 / (1.0 + src.mean));
  return dist(rng);
}

inline std::uint64_t sample_photon_number(const SourceModel& src, std::uint64_t seed) {
  CounterRng rng(derive_key(seed, {}));
  return sample_photon_number(src, rng);
}

inline double snr_classical(double nbar) {
  if (!(nbar > 0.0)) throw DomainError("mean photon number must be > 0");
  return std::sqrt(nbar);
}

/// Normalised interaction-free SNR: |dP_D0 - dP_D1| / sqrt(sum of the four
/// detection probabilities), with dP_X = P_X(p=0) - P_X(p=1).
inline double f_factor(int n, AbsorberModel variant = AbsorberModel::Mixture) {
  const RunOutcome open = run_protocol({n, 0.0, variant});
  const RunOutcome blocked = run_protocol({n, 1.0, variant});
  const double signal =
      std::abs((open.p_d0 - blocked.p_d0) - (open.p_d1 - blocked.p_d1));
  const double noise = std::sqrt(open.p_d0 + blocked.p_d0 + open.p_d1 + blocked.p_d1);
  return signal / noise;
}

/// Inclusive equally spaced grid i/(points-1), i = 0..points-1.
inline std::vector<double> block_probability_grid(int points = 100) {
  if (points < 2) throw DomainError("probability grid needs at least two points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / (points - 1);
  return grid;
}

inline double mean_absorption(int n, AbsorberModel variant, std::span<const double> grid) {
  if (grid.empty()) throw DomainError("empty probability grid");
  double sum = 0.0;
  for (double p : grid) sum += run_protocol({n, p, variant}).p_abs;
  return sum / static_cast<double>(grid.size());
}

inline double mean_absorption(int n, AbsorberModel variant = AbsorberModel::Mixture) {
  const std::vector<double> grid = block_probability_grid();
  return mean_absorption(n, variant, grid);
}

/// SNR per absorbed photon, normalised by sqrt(N). Returns +infinity when the
/// grid has no absorption at all.
inline double g_factor(int n, AbsorberModel variant, std::span<const double> grid) {
  const double absorbed = mean_absorption(n, variant, grid);
  if (absorbed <= 0.0) return std::numeric_limits<double>::infinity();
  return f_factor(n, variant) / std::sqrt(absorbed);
}

inline double g_factor(int n, AbsorberModel variant = AbsorberModel::Mixture) {
  const std::vector<double> grid = block_probability_grid();
  return g_factor(n, variant, grid);
}

struct SnrReport {
  int n = 1;
  AbsorberModel variant = AbsorberModel::Mixture;
  double f = 0.0;
  double g = 0.0;
  double mean_absorption = 0.0;
  double snr_pol = 0.0;
  double snr_ifp = 0.0;
  double snr_absd = 0.0;
};

inline SnrReport snr_report(int n, AbsorberModel variant, double nbar) {
  SnrReport r;
  r.n = n;
  r.variant = variant;
  r.f = f_factor(n, variant);
  r.mean_absorption = mean_absorption(n, variant);
  r.g = r.mean_absorption > 0.0 ? r.f / std::sqrt(r.mean_absorption)
                                : std::numeric_limits<double>::infinity();
  r.snr_pol = snr_classical(nbar);
  r.snr_ifp = r.f * r.snr_pol;
  r.snr_absd = r.g * r.snr_pol;
  return r;
}

}  // namespace ifp
