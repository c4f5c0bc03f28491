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
 * @file zeno.hpp
 * @brief Chained quantum-Zeno interferometer for one polarization-pixel mode.
 *
 * Path modes: index 0 is the mode the photon is injected into and which exits
 * to ICCD1 (the "blocked" detector); index 1 is the object arm and exits to
 * ICCD0. One cycle is a beamsplitter pass with angle pi/(4n), the arm round
 * trip (object channel on mode 1), and a second beamsplitter pass. With no
 * object the n cycles rotate the photon by pi/2 in amplitude angle, so it
 * always reaches ICCD0.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "ifp/errors.hpp"
#include "ifp/rng.hpp"

namespace ifp {

/// How the per-cycle block probability p acts on the photon.
enum class AbsorberModel {
  /// Each cycle: with probability p the object arm is blocked (projective
  /// absorption, coherence lost), otherwise identity.
  Mixture,
  /// Coherent amplitude transmission sqrt(1 - p) on the object arm.
  Damping,
  /// The object blocks the whole run with probability p.
  Runwise,
};

inline constexpr std::array<AbsorberModel, 3> kAllAbsorberModels{
    AbsorberModel::Mixture, AbsorberModel::Damping, AbsorberModel::Runwise};

constexpr std::string_view to_string(AbsorberModel m) {
  switch (m) {
    case AbsorberModel::Mixture: return "mixture";
    case AbsorberModel::Damping: return "damping";
    case AbsorberModel::Runwise: return "runwise";
  }
  return "?";
}

inline AbsorberModel parse_absorber_model(std::string_view s) {
  for (AbsorberModel m : kAllAbsorberModels) {
    if (s == to_string(m)) return m;
  }
  throw DomainError("unknown absorber model '" + std::string(s) +
                    "' (expected mixture, damping or runwise)");
}

struct PathState {
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  double absorbed = 0.0;

  /// Photon injected into mode 0.
  static PathState initial() {
    PathState s;
    s.rho(0, 0) = 1.0;
    return s;
  }

  double trace() const { return rho.trace().real(); }
};

struct ZenoParams {
  int n = 1;
  double p = 0.0;
  AbsorberModel variant = AbsorberModel::Mixture;

  void validate() const {
    if (n < 1) throw DomainError("cycle count must be >= 1, got " + std::to_string(n));
    if (!(p >= 0.0 && p <= 1.0)) {
      throw DomainError("block probability must lie in [0, 1], got " + std::to_string(p));
    }
  }
};

struct RunOutcome {
  double p_d0 = 0.0;
  double p_d1 = 0.0;
  double p_abs = 0.0;

  double discrimination() const { return p_d0 - p_d1; }
};

/// Effective per-cycle block probability for an object crossed twice per
/// cycle with single-pass block probability p_pass.
inline double per_cycle_block_probability(double p_pass) {
  if (!(p_pass >= 0.0 && p_pass <= 1.0)) throw DomainError("single-pass probability outside [0, 1]");
  return 1.0 - (1.0 - p_pass) * (1.0 - p_pass);
}

/// Pauli-Y rotation between the two path modes, [[c, -s], [s, c]].
inline Eigen::Matrix2d beamsplitter_rotation(double theta) {
  Eigen::Matrix2d r;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  r << c, -s, s, c;
  return r;
}

inline PathState object_channel(PathState state, double p, AbsorberModel variant) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("block probability must lie in [0, 1], got " + std::to_string(p));
  }
  if (variant == AbsorberModel::Runwise) return state;

  const double arm = state.rho(1, 1).real();
  const double coherence =
      variant == AbsorberModel::Mixture ? 1.0 - p : std::sqrt(1.0 - p);
  state.absorbed += p * arm;
  state.rho(1, 1) *= 1.0 - p;
  state.rho(0, 1) *= coherence;
  state.rho(1, 0) *= coherence;
  return state;
}

namespace detail {

inline RunOutcome evolve(int n, double p, AbsorberModel channel) {
  const Eigen::Matrix2cd bs =
      beamsplitter_rotation(std::numbers::pi / (4.0 * n)).cast<std::complex<double>>();
  PathState s = PathState::initial();
  for (int cycle = 0; cycle < n; ++cycle) {
    s.rho = bs * s.rho * bs.adjoint();
    s = object_channel(s, p, channel);
    s.rho = bs * s.rho * bs.adjoint();
  }
  return {s.rho(1, 1).real(), s.rho(0, 0).real(), s.absorbed};
}

}  // namespace detail

inline RunOutcome run_protocol(const ZenoParams& params) {
  params.validate();
  if (params.variant != AbsorberModel::Runwise) {
    return detail::evolve(params.n, params.p, params.variant);
  }
  const double p = params.p;
  const RunOutcome blocked = detail::evolve(params.n, 1.0, AbsorberModel::Mixture);
  const RunOutcome open = detail::evolve(params.n, 0.0, AbsorberModel::Mixture);
  return {p * blocked.p_d0 + (1.0 - p) * open.p_d0, p * blocked.p_d1 + (1.0 - p) * open.p_d1,
          p * blocked.p_abs + (1.0 - p) * open.p_abs};
}

inline double discrimination_signal(const ZenoParams& params) {
  return run_protocol(params).discrimination();
}

struct OutcomeCounts {
  std::uint64_t d0 = 0;
  std::uint64_t d1 = 0;
  std::uint64_t absorbed = 0;

  std::uint64_t total() const { return d0 + d1 + absorbed; }

  OutcomeCounts& operator+=(const OutcomeCounts& o) {
    d0 += o.d0;
    d1 += o.d1;
    absorbed += o.absorbed;
    return *this;
  }

  friend bool operator==(const OutcomeCounts&, const OutcomeCounts&) = default;
};

enum class TrialResult { D0, D1, Absorbed };

/// One stochastic photon trajectory. Amplitudes stay real because the
/// beamsplitter and every channel branch are real.
template <class Rng>
TrialResult run_trial(const ZenoParams& params, Rng& rng) {
  const Eigen::Matrix2d bs = beamsplitter_rotation(std::numbers::pi / (4.0 * params.n));
  Eigen::Vector2d amp(1.0, 0.0);

  double block = params.p;
  AbsorberModel channel = params.variant;
  if (channel == AbsorberModel::Runwise) {
    block = rng.uniform() < params.p ? 1.0 : 0.0;
    channel = AbsorberModel::Mixture;
  }

  for (int cycle = 0; cycle < params.n; ++cycle) {
    amp = bs * amp;
    if (block > 0.0) {
      const double arm = amp[1] * amp[1];
      if (channel == AbsorberModel::Mixture) {
        if (block >= 1.0 || rng.uniform() < block) {
          if (rng.uniform() < arm) return TrialResult::Absorbed;
          amp = Eigen::Vector2d(amp[0] < 0.0 ? -1.0 : 1.0, 0.0);
        }
      } else {
        if (rng.uniform() < block * arm) return TrialResult::Absorbed;
        amp[1] *= std::sqrt(1.0 - block);
        amp.normalize();
      }
    }
    amp = bs * amp;
  }
  return rng.uniform() < amp[1] * amp[1] ? TrialResult::D0 : TrialResult::D1;
}

/// Monte Carlo estimate of run_protocol. Trial i draws from the substream
/// (seed, i), so counts do not depend on evaluation order.
inline OutcomeCounts run_protocol_mc(const ZenoParams& params, std::uint64_t trials,
                                     std::uint64_t seed) {
  params.validate();
  if (trials < 1) throw DomainError("Monte Carlo needs at least one trial");
  OutcomeCounts counts;
  for (std::uint64_t t = 0; t < trials; ++t) {
    CounterRng rng = CounterRng::stream(seed, {t});
    switch (run_trial(params, rng)) {
      case TrialResult::D0: ++counts.d0; break;
      case TrialResult::D1: ++counts.d1; break;
      case TrialResult::Absorbed: ++counts.absorbed; break;
    }
  }
  return counts;
}

}  // namespace ifp
