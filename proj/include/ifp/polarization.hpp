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
 * @file polarization.hpp
 * @brief Stokes/Mueller calculus for polarimetry.
 *
 * Conventions used throughout the library:
 *  - Stokes components are ordered (S0, S1, S2, S3) and Mueller matrices act
 *    on column vectors in that order.
 *  - S3 > 0 is right-circular, with R = (1, i)/sqrt(2) in the (h, v) Jones
 *    basis. Swapping R and L flips the sign of the third diattenuation
 *    component everywhere.
 *  - Diattenuators use the unit-vector form of the inner 3x3 block,
 *    m_D = sqrt(1 - |D|^2) I + (1 - sqrt(1 - |D|^2)) D^ D^T, which keeps the
 *    per-basis transmission contrast equal to |D_k|.
 */
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "ifp/errors.hpp"

namespace ifp {

using Complex = std::complex<double>;

/// Tolerance applied to hard physical invariants (relative).
inline constexpr double kInvariantTolerance = 1e-9;

// ---------------------------------------------------------------------------
// Probe states and bases

enum class Probe { H, V, D, A, R, L };
enum class Basis { HV, DA, RL };

inline constexpr std::array<Probe, 6> kAllProbes{Probe::H, Probe::V, Probe::D,
                                                 Probe::A, Probe::R, Probe::L};
inline constexpr std::array<Basis, 3> kAllBases{Basis::HV, Basis::DA, Basis::RL};

constexpr std::size_t index_of(Probe p) { return static_cast<std::size_t>(p); }
constexpr std::size_t index_of(Basis b) { return static_cast<std::size_t>(b); }

constexpr Basis basis_of(Probe p) {
  return static_cast<Basis>(static_cast<int>(p) / 2);
}

/// The two orthogonal probes of a basis; the first one is the state toward
/// which a positive diattenuation component points.
constexpr std::pair<Probe, Probe> probes_of(Basis b) {
  const int i = static_cast<int>(b) * 2;
  return {static_cast<Probe>(i), static_cast<Probe>(i + 1)};
}

constexpr Probe orthogonal(Probe p) {
  return static_cast<Probe>(static_cast<int>(p) ^ 1);
}

constexpr bool is_first_of_basis(Probe p) {
  return (static_cast<int>(p) & 1) == 0;
}

constexpr std::string_view to_string(Probe p) {
  constexpr std::array<std::string_view, 6> names{"H", "V", "D", "A", "R", "L"};
  return names[index_of(p)];
}

constexpr std::string_view to_string(Basis b) {
  constexpr std::array<std::string_view, 3> names{"HV", "DA", "RL"};
  return names[index_of(b)];
}

inline Basis parse_basis(std::string_view s) {
  for (Basis b : kAllBases) {
    if (s == to_string(b)) return b;
  }
  throw DomainError("unknown polarization basis '" + std::string(s) +
                    "' (expected HV, DA or RL)");
}

// ---------------------------------------------------------------------------
// Jones and Stokes vectors

struct JonesVector {
  Complex h{1.0, 0.0};
  Complex v{0.0, 0.0};

  double intensity() const { return std::norm(h) + std::norm(v); }

  /// Builds a unit-intensity probe state. Throws DomainError on a zero vector.
  static JonesVector normalized(Complex h, Complex v) {
    const double norm = std::sqrt(std::norm(h) + std::norm(v));
    if (!(norm > 0.0)) throw DomainError("zero Jones vector cannot be normalized");
    return {h / norm, v / norm};
  }
};

struct StokesVector {
  double s0 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;

  Eigen::Vector4d as_vector() const { return {s0, s1, s2, s3}; }
  Eigen::Vector3d polarization() const { return {s1, s2, s3}; }

  static StokesVector from_vector(const Eigen::Vector4d& v) {
    return {v[0], v[1], v[2], v[3]};
  }

  bool is_physical(double rel_tol = kInvariantTolerance) const {
    if (s0 < 0.0) return false;
    return s1 * s1 + s2 * s2 + s3 * s3 <= s0 * s0 * (1.0 + rel_tol) + rel_tol * rel_tol;
  }
};

inline StokesVector stokes_from_jones(const JonesVector& j) {
  const double ih = std::norm(j.h);
  const double iv = std::norm(j.v);
  if (!(ih + iv > 0.0)) throw DomainError("Stokes vector of a zero Jones vector");
  // h* v; S2 = h*v + h v* = 2 Re(h* v), S3 = -i(h*v - h v*) = 2 Im(h* v).
  const Complex cross = std::conj(j.h) * j.v;
  return {ih + iv, ih - iv, 2.0 * cross.real(), 2.0 * cross.imag()};
}

inline double degree_of_polarization(const StokesVector& s) {
  if (!(s.s0 > 0.0)) throw DomainError("degree of polarization needs s0 > 0");
  return s.polarization().norm() / s.s0;
}

inline JonesVector probe_jones(Probe p) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (p) {
    case Probe::H: return {1.0, 0.0};
    case Probe::V: return {0.0, 1.0};
    case Probe::D: return {r, r};
    case Probe::A: return {r, -r};
    case Probe::R: return {r, Complex(0.0, r)};
    case Probe::L: return {r, Complex(0.0, -r)};
  }
  throw DomainError("invalid probe");
}

/// Unit-s0 Stokes image of a canonical probe.
inline StokesVector probe_stokes(Probe p) {
  switch (p) {
    case Probe::H: return {1, 1, 0, 0};
    case Probe::V: return {1, -1, 0, 0};
    case Probe::D: return {1, 0, 1, 0};
    case Probe::A: return {1, 0, -1, 0};
    case Probe::R: return {1, 0, 0, 1};
    case Probe::L: return {1, 0, 0, -1};
  }
  throw DomainError("invalid probe");
}

// ---------------------------------------------------------------------------
// Mueller matrices

struct MuellerMatrix {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();

  static MuellerMatrix identity() { return {}; }
  double operator()(int row, int col) const { return m(row, col); }
};

inline StokesVector apply_mueller(const MuellerMatrix& mm, const StokesVector& s) {
  return StokesVector::from_vector(mm.m * s.as_vector());
}

/// Pure diattenuator: transmittance tau and diattenuation vector d in
/// (H/V, D/A, R/L) order.
class Diattenuator {
 public:
  /// Passivity slack: tau * (1 + |d|) may exceed 1 by at most this much.
  static constexpr double kPassivityTolerance = 1e-9;

  Diattenuator() = default;

  Diattenuator(double tau, const Eigen::Vector3d& d) : tau_(tau), d_(d) {
    if (!(tau > 0.0 && tau <= 1.0)) {
      throw DomainError("diattenuator transmittance must lie in (0, 1], got " +
                        std::to_string(tau));
    }
    const double mag = d.norm();
    if (!(mag <= 1.0 + 1e-12)) {
      throw DomainError("diattenuation magnitude exceeds 1: |d| = " + std::to_string(mag));
    }
    if (tau * (1.0 + mag) > 1.0 + kPassivityTolerance) {
      throw DomainError("diattenuator violates passivity: tau*(1+|d|) = " +
                        std::to_string(tau * (1.0 + mag)));
    }
  }

  Diattenuator(double tau, double d1, double d2, double d3)
      : Diattenuator(tau, Eigen::Vector3d(d1, d2, d3)) {}

  static Diattenuator transparent() { return Diattenuator(1.0, Eigen::Vector3d::Zero()); }

  double tau() const { return tau_; }
  const Eigen::Vector3d& d() const { return d_; }

 private:
  double tau_ = 1.0;
  Eigen::Vector3d d_ = Eigen::Vector3d::Zero();
};

/// Inner 3x3 block of a diattenuator Mueller matrix for diattenuation d.
inline Eigen::Matrix3d diattenuator_inner_block(const Eigen::Vector3d& d) {
  const double mag = d.norm();
  if (mag > 1.0 + 1e-12) throw DomainError("diattenuation magnitude exceeds 1");
  if (mag == 0.0) return Eigen::Matrix3d::Identity();
  const double root = std::sqrt(std::max(0.0, 1.0 - mag * mag));
  const Eigen::Vector3d unit = d / mag;
  return root * Eigen::Matrix3d::Identity() + (1.0 - root) * unit * unit.transpose();
}

inline MuellerMatrix diattenuator_mueller(const Diattenuator& x) {
  MuellerMatrix out;
  out.m(0, 0) = 1.0;
  out.m.block<1, 3>(0, 1) = x.d().transpose();
  out.m.block<3, 1>(1, 0) = x.d();
  out.m.block<3, 3>(1, 1) = diattenuator_inner_block(x.d());
  out.m *= x.tau();
  return out;
}

// ---------------------------------------------------------------------------
// Intensity-based Stokes estimation and the 36-intensity baseline

/// Relative tolerance on agreement between the three S0 estimates.
inline constexpr double kS0ConsistencyTolerance = 1e-6;

/// The three S0 estimates (I_H+I_V, I_D+I_A, I_R+I_L) disagree.
class StokesConsistencyError : public std::runtime_error {
 public:
  explicit StokesConsistencyError(std::array<double, 3> sums)
      : std::runtime_error("inconsistent S0 estimates: HV=" + std::to_string(sums[0]) +
                           " DA=" + std::to_string(sums[1]) +
                           " RL=" + std::to_string(sums[2])),
        sums_(sums) {}

  const std::array<double, 3>& sums() const { return sums_; }

 private:
  std::array<double, 3> sums_;
};

/// Analyzer intensities ordered as kAllProbes (H, V, D, A, R, L).
using AnalyzerIntensities = std::array<double, 6>;

inline StokesVector stokes_from_intensities(double iH, double iV, double iD, double iA,
                                            double iR, double iL) {
  for (double x : {iH, iV, iD, iA, iR, iL}) {
    if (!(x >= 0.0)) throw DomainError("negative analyzer intensity");
  }
  const std::array<double, 3> sums{iH + iV, iD + iA, iR + iL};
  const double hi = std::max({sums[0], sums[1], sums[2]});
  const double lo = std::min({sums[0], sums[1], sums[2]});
  if (hi - lo > kS0ConsistencyTolerance * hi) throw StokesConsistencyError(sums);
  return {sums[0], iH - iV, iD - iA, iR - iL};
}

inline StokesVector stokes_from_intensities(const AnalyzerIntensities& i) {
  return stokes_from_intensities(i[0], i[1], i[2], i[3], i[4], i[5]);
}

/// Intensities behind ideal analyzers for each canonical state.
inline AnalyzerIntensities analyzer_intensities(const StokesVector& s) {
  AnalyzerIntensities out{};
  for (Probe a : kAllProbes) {
    out[index_of(a)] = 0.5 * (s.s0 + probe_stokes(a).polarization().dot(s.polarization()));
  }
  return out;
}

using IntensityTable = std::map<Probe, AnalyzerIntensities>;

/// Noiseless 6x6 intensity table for a known Mueller matrix.
inline IntensityTable simulate_intensity_table(const MuellerMatrix& mm) {
  IntensityTable table;
  for (Probe p : kAllProbes) table[p] = analyzer_intensities(apply_mueller(mm, probe_stokes(p)));
  return table;
}

struct MuellerEstimate {
  MuellerMatrix mueller;
  /// Frobenius norm of the least-squares residual over the six probes.
  double residual = 0.0;
};

/// Least-squares Mueller matrix from the full 6-probe by 6-analyzer table.
inline MuellerEstimate mueller_from_36_intensities(const IntensityTable& table) {
  Eigen::Matrix<double, 6, 4> inputs;
  Eigen::Matrix<double, 6, 4> outputs;
  for (Probe p : kAllProbes) {
    const auto it = table.find(p);
    if (it == table.end()) {
      throw DomainError("intensity table is missing probe " + std::string(to_string(p)));
    }
    const auto row = static_cast<Eigen::Index>(index_of(p));
    inputs.row(row) = probe_stokes(p).as_vector().transpose();
    outputs.row(row) = stokes_from_intensities(it->second).as_vector().transpose();
  }
  // Rows are probes: inputs * M^T = outputs.
  const Eigen::ColPivHouseholderQR<Eigen::Matrix<double, 6, 4>> qr(inputs);
  if (qr.rank() < 4) throw NumericalError("probe design matrix is rank deficient");
  const Eigen::Matrix4d mt = qr.solve(outputs);
  MuellerEstimate est;
  est.mueller.m = mt.transpose();
  est.residual = (inputs * mt - outputs).norm();
  return est;
}

// ---------------------------------------------------------------------------
// Heralding-arm basis rotation

/// Net unitary of the QWP/HWP/QWP stack: maps the basis's first state to
/// (1, 0) and its second state to (0, 1).
inline Eigen::Matrix2cd basis_rotation_jones(Basis b) {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd u;
  switch (b) {
    case Basis::HV:
      u.setIdentity();
      break;
    case Basis::DA:
      u << r, r, r, -r;
      break;
    case Basis::RL:
      u << r, -i * r, r, i * r;
      break;
  }
  return u;
}

inline JonesVector apply_jones(const Eigen::Matrix2cd& u, const JonesVector& j) {
  const Eigen::Vector2cd out = u * Eigen::Vector2cd(j.h, j.v);
  return {out[0], out[1]};
}

}  // namespace ifp
