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
 * @file protocol.hpp
 * @brief Heralded interaction-free polarimetry over a pixelated sample.
 *
 * Forward model: each pixel is a pure diattenuator, and each probe state sees
 * it as an object that blocks the interferometer arm with probability
 * p = 1 - T, where T is the diattenuator's intensity transmission for that
 * probe. Every pixel runs its own interferometer; pixels never interact.
 *
 * Inverse model: absorbed photons never reach a detector, so block
 * probabilities are recovered from the observable ICCD1 fraction
 * c1 / (c0 + c1), which is strictly increasing in p at fixed n.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ifp/errors.hpp"
#include "ifp/polarization.hpp"
#include "ifp/rng.hpp"
#include "ifp/stats.hpp"
#include "ifp/zeno.hpp"

namespace ifp {

struct SampleModel {
  int width = 0;
  int height = 0;
  /// Row-major: index y * width + x.
  std::vector<Diattenuator> pixels;

  SampleModel() = default;
  SampleModel(int w, int h, const Diattenuator& fill = Diattenuator::transparent())
      : width(w), height(h), pixels(static_cast<std::size_t>(std::max(0, w * h)), fill) {
    validate();
  }

  std::size_t size() const { return pixels.size(); }
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  const Diattenuator& at(int x, int y) const { return pixels.at(index(x, y)); }
  Diattenuator& at(int x, int y) { return pixels.at(index(x, y)); }

  void validate() const {
    if (width < 1 || height < 1) throw DomainError("sample dimensions must be positive");
    if (pixels.size() != static_cast<std::size_t>(width) * height) {
      throw DomainError("sample has " + std::to_string(pixels.size()) + " pixels, expected " +
                        std::to_string(width * height));
    }
  }
};

struct ScenarioConfig {
  SampleModel sample;
  int n = 10;
  double pairs_per_mode = 1e4;
  AbsorberModel variant = AbsorberModel::Mixture;
  SourceKind source = SourceKind::Poisson;
  std::uint64_t seed = 0;
  std::vector<Basis> bases{Basis::HV, Basis::DA, Basis::RL};

  void validate() const {
    sample.validate();
    if (n < 1) throw DomainError("cycle count must be >= 1");
    if (!(pairs_per_mode > 0.0)) throw DomainError("pairs_per_mode must be > 0");
    if (bases.empty()) throw DomainError("at least one basis is required");
    for (std::size_t i = 0; i < bases.size(); ++i) {
      for (std::size_t j = i + 1; j < bases.size(); ++j) {
        if (bases[i] == bases[j]) {
          throw DomainError("basis " + std::string(to_string(bases[i])) + " listed twice");
        }
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Heralding

/// Heralding-arm detectors behind the polarizing beamsplitter.
enum class Herald { DX, DY };

constexpr std::string_view to_string(Herald h) { return h == Herald::DX ? "DX" : "DY"; }

/// Detector that fires for the heralding partner of an imaging photon in
/// state `imaging`. The partner is in the orthogonal state; after the basis
/// rotation it leaves the PBS on the V port (DX) when the imaging photon is
/// the first state of its basis and on the H port (DY) otherwise.
inline Herald herald_detector(Probe imaging) {
  const JonesVector partner = probe_jones(orthogonal(imaging));
  const JonesVector rotated = apply_jones(basis_rotation_jones(basis_of(imaging)), partner);
  return std::norm(rotated.v) > 0.5 ? Herald::DX : Herald::DY;
}

/// Imaging probe tagged by a heralding detector in a given basis.
inline Probe heralded_probe(Basis b, Herald h) {
  const auto [first, second] = probes_of(b);
  return herald_detector(first) == h ? first : second;
}

// ---------------------------------------------------------------------------
// Forward model

/// Passivity check slack for probe transmission.
inline constexpr double kTransmissionSlack = 1e-12;

/// Intensity transmission tau * (1 + d . s) for a unit-s0 probe.
inline double probe_transmission(const Diattenuator& pix, Probe probe) {
  return pix.tau() * (1.0 + pix.d().dot(probe_stokes(probe).polarization()));
}

inline double effective_block_probability(const Diattenuator& pix, Probe probe) {
  const double t = probe_transmission(pix, probe);
  if (t > 1.0 + kTransmissionSlack) {
    throw DomainError("passivity violation: probe " + std::string(to_string(probe)) +
                      " transmission " + std::to_string(t) + " exceeds 1");
  }
  if (t < -kTransmissionSlack) throw DomainError("negative probe transmission");
  return std::clamp(1.0 - t, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Coincidence tables

template <class Count>
struct CellCounts {
  Count iccd0{};
  Count iccd1{};
  Count absorbed{};

  Count total() const { return iccd0 + iccd1 + absorbed; }
  friend bool operator==(const CellCounts&, const CellCounts&) = default;
};

/// Counts per (pixel, basis, heralding detector). Integer for simulated
/// acquisitions, real for expected-count tables.
template <class Count>
class BasicCoincidenceTable {
 public:
  BasicCoincidenceTable() = default;
  BasicCoincidenceTable(int width, int height)
      : width_(width),
        height_(height),
        cells_(static_cast<std::size_t>(width) * height * 6),
        covered_(static_cast<std::size_t>(width) * height * 3, false) {}

  int width() const { return width_; }
  int height() const { return height_; }

  CellCounts<Count>& at(int x, int y, Basis b, Herald h) { return cells_.at(cell(x, y, b, h)); }
  const CellCounts<Count>& at(int x, int y, Basis b, Herald h) const {
    return cells_.at(cell(x, y, b, h));
  }

  bool covers(int x, int y, Basis b) const { return covered_.at(basis_slot(x, y, b)); }
  void mark_covered(int x, int y, Basis b) { covered_.at(basis_slot(x, y, b)) = true; }

  friend bool operator==(const BasicCoincidenceTable&, const BasicCoincidenceTable&) = default;

 private:
  std::size_t basis_slot(int x, int y, Basis b) const {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) throw DomainError("pixel out of range");
    return (static_cast<std::size_t>(y) * width_ + x) * 3 + index_of(b);
  }
  std::size_t cell(int x, int y, Basis b, Herald h) const {
    return basis_slot(x, y, b) * 2 + static_cast<std::size_t>(h);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<CellCounts<Count>> cells_;
  std::vector<bool> covered_;
};

using CoincidenceTable = BasicCoincidenceTable<std::uint64_t>;
using ExpectedCoincidenceTable = BasicCoincidenceTable<double>;

/// Monte Carlo of the heralded apparatus. Each (pixel, probe) cell draws its
/// pair number and photon trajectories from its own substream of cfg.seed.
inline CoincidenceTable simulate_heralded_run(const ScenarioConfig& cfg) {
  cfg.validate();
  const SampleModel& sample = cfg.sample;
  CoincidenceTable table(sample.width, sample.height);
  const SourceModel source{cfg.source, cfg.pairs_per_mode};

  for (int y = 0; y < sample.height; ++y) {
    for (int x = 0; x < sample.width; ++x) {
      const auto pixel = static_cast<std::uint64_t>(sample.index(x, y));
      for (Basis b : cfg.bases) {
        table.mark_covered(x, y, b);
        const auto [first, second] = probes_of(b);
        for (Probe probe : {first, second}) {
          const auto probe_id = static_cast<std::uint64_t>(index_of(probe));
          CounterRng pair_rng = CounterRng::stream(cfg.seed, {1, pixel, probe_id});
          const std::uint64_t pairs = sample_photon_number(source, pair_rng);
          if (pairs == 0) continue;
          const ZenoParams params{cfg.n, effective_block_probability(sample.at(x, y), probe),
                                  cfg.variant};
          const OutcomeCounts counts =
              run_protocol_mc(params, pairs, derive_key(cfg.seed, {2, pixel, probe_id}));
          CellCounts<std::uint64_t>& cell = table.at(x, y, b, herald_detector(probe));
          cell.iccd0 += counts.d0;
          cell.iccd1 += counts.d1;
          cell.absorbed += counts.absorbed;
        }
      }
    }
  }
  return table;
}

/// Noiseless table: pairs_per_mode times the analytic outcome probabilities.
inline ExpectedCoincidenceTable expected_coincidences(const ScenarioConfig& cfg) {
  cfg.validate();
  const SampleModel& sample = cfg.sample;
  ExpectedCoincidenceTable table(sample.width, sample.height);
  for (int y = 0; y < sample.height; ++y) {
    for (int x = 0; x < sample.width; ++x) {
      for (Basis b : cfg.bases) {
        table.mark_covered(x, y, b);
        const auto [first, second] = probes_of(b);
        for (Probe probe : {first, second}) {
          const RunOutcome o = run_protocol(
              {cfg.n, effective_block_probability(cfg.sample.at(x, y), probe), cfg.variant});
          CellCounts<double>& cell = table.at(x, y, b, herald_detector(probe));
          cell.iccd0 += cfg.pairs_per_mode * o.p_d0;
          cell.iccd1 += cfg.pairs_per_mode * o.p_d1;
          cell.absorbed += cfg.pairs_per_mode * o.p_abs;
        }
      }
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Inversion

/// Bisection tolerance on p.
inline constexpr double kBisectionTolerance = 1e-10;
/// z-score of the reported confidence interval (Wilson score, ~99.7%).
inline constexpr double kConfidenceZ = 3.0;

/// Analytic ICCD1 share of detected photons.
inline double detected_blocked_fraction(int n, double p, AbsorberModel variant) {
  const RunOutcome o = run_protocol({n, p, variant});
  const double detected = o.p_d0 + o.p_d1;
  return detected > 0.0 ? o.p_d1 / detected : 1.0;
}

struct BlockEstimate {
  double p_hat = 0.0;
  double half_width = 0.0;
  /// Observed fraction fell outside the range reachable for this n.
  bool clipped = false;
};

namespace detail {

/// Smallest p in [0, 1] whose detected-fraction curve reaches `target`.
inline double invert_fraction(double target, int n, AbsorberModel variant, double f_lo,
                              double f_hi) {
  if (target <= f_lo) return 0.0;
  if (target >= f_hi) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > kBisectionTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (detected_blocked_fraction(n, mid, variant) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Inverts the detected-fraction curve for one mode. Counts may be
/// non-integer (expected-count tables).
inline BlockEstimate estimate_block_probability(double c_d0, double c_d1, int n,
                                                AbsorberModel variant) {
  if (!(c_d0 >= 0.0 && c_d1 >= 0.0)) throw DomainError("negative detector counts");
  const double detected = c_d0 + c_d1;
  if (!(detected >= 1.0)) throw DomainError("block estimate needs at least one detected photon");
  if (n < 1) throw DomainError("cycle count must be >= 1");

  const double f_lo = detected_blocked_fraction(n, 0.0, variant);
  const double f_hi = detected_blocked_fraction(n, 1.0, variant);
  const double observed = c_d1 / detected;
  constexpr double kEdge = 1e-12;

  BlockEstimate est;
  est.clipped = observed < f_lo - kEdge || observed > f_hi + kEdge;
  est.p_hat = detail::invert_fraction(observed, n, variant, f_lo, f_hi);

  // Wilson score interval on the binomial fraction, mapped through the
  // monotone inverse.
  const double z2 = kConfidenceZ * kConfidenceZ;
  const double denom = 1.0 + z2 / detected;
  const double centre = (observed + z2 / (2.0 * detected)) / denom;
  const double spread =
      kConfidenceZ / denom *
      std::sqrt(observed * (1.0 - observed) / detected + z2 / (4.0 * detected * detected));
  const double p_lo = detail::invert_fraction(centre - spread, n, variant, f_lo, f_hi);
  const double p_hi = detail::invert_fraction(centre + spread, n, variant, f_lo, f_hi);
  est.half_width = std::max(est.p_hat - p_lo, p_hi - est.p_hat);
  return est;
}

struct DiattenuatorEstimate {
  double tau = 0.0;
  Eigen::Vector3d d = Eigen::Vector3d::Zero();
  /// max - min of the three per-basis transmittance estimates.
  double tau_consistency = 0.0;
  /// d component is undefined (NaN) when both transmissions of its basis are 0.
  std::array<bool, 3> d_defined{true, true, true};
  std::array<double, 3> tau_per_basis{};
};

/// Per-basis transmittance and signed diattenuation from six probe
/// transmissions ordered H, V, D, A, R, L.
inline DiattenuatorEstimate reconstruct_diattenuator(const std::array<double, 6>& t) {
  for (double x : t) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("probe transmission outside [0, 1]");
  }
  DiattenuatorEstimate est;
  double tau_sum = 0.0;
  for (Basis b : kAllBases) {
    const auto [first, second] = probes_of(b);
    const double t1 = t[index_of(first)];
    const double t2 = t[index_of(second)];
    const std::size_t k = index_of(b);
    est.tau_per_basis[k] = 0.5 * (t1 + t2);
    tau_sum += est.tau_per_basis[k];
    if (t1 + t2 > 0.0) {
      est.d[static_cast<Eigen::Index>(k)] = (t1 - t2) / (t1 + t2);
    } else {
      est.d[static_cast<Eigen::Index>(k)] = std::numeric_limits<double>::quiet_NaN();
      est.d_defined[k] = false;
    }
  }
  est.tau = tau_sum / 3.0;
  const auto [lo, hi] = std::minmax_element(est.tau_per_basis.begin(), est.tau_per_basis.end());
  est.tau_consistency = *hi - *lo;
  return est;
}

struct PixelReconstruction {
  DiattenuatorEstimate estimate;
  /// Block-probability estimates ordered H, V, D, A, R, L.
  std::array<BlockEstimate, 6> modes{};
};

struct ReconstructionResult {
  int width = 0;
  int height = 0;
  std::vector<PixelReconstruction> pixels;
  std::size_t clipped_modes = 0;

  const PixelReconstruction& at(int x, int y) const {
    return pixels.at(static_cast<std::size_t>(y) * width + x);
  }
};

/// Missing basis coverage for a pixel.
class IncompleteDataError : public DomainError {
 public:
  using DomainError::DomainError;
};

template <class Count>
ReconstructionResult reconstruct_image(const BasicCoincidenceTable<Count>& table,
                                       const ScenarioConfig& cfg) {
  ReconstructionResult out;
  out.width = table.width();
  out.height = table.height();
  out.pixels.resize(static_cast<std::size_t>(out.width) * out.height);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      PixelReconstruction& pix = out.pixels[static_cast<std::size_t>(y) * out.width + x];
      std::array<double, 6> transmission{};
      for (Basis b : kAllBases) {
        if (!table.covers(x, y, b)) {
          throw IncompleteDataError("pixel (" + std::to_string(x) + "," + std::to_string(y) +
                                    ") has no data for basis " + std::string(to_string(b)));
        }
        for (Herald h : {Herald::DX, Herald::DY}) {
          const Probe probe = heralded_probe(b, h);
          const CellCounts<Count>& cell = table.at(x, y, b, h);
          BlockEstimate est;
          if (static_cast<double>(cell.iccd0) + static_cast<double>(cell.iccd1) >= 1.0) {
            est = estimate_block_probability(static_cast<double>(cell.iccd0),
                                             static_cast<double>(cell.iccd1), cfg.n, cfg.variant);
          } else {
            // Nothing detected: every heralded photon was absorbed (or none
            // were emitted). Treat the mode as fully blocking.
            est.p_hat = 1.0;
            est.half_width = 1.0;
            est.clipped = true;
          }
          if (est.clipped) ++out.clipped_modes;
          pix.modes[index_of(probe)] = est;
          transmission[index_of(probe)] = 1.0 - est.p_hat;
        }
      }
      pix.estimate = reconstruct_diattenuator(transmission);
    }
  }
  return out;
}

}  // namespace ifp
