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
 * @file commands.hpp
 * @brief Implementation of the `ifp` command-line subcommands.
 *
 * Output conventions (schema version 1):
 *  - CSV, comma separated, LF line endings, header row first.
 *  - Reals use 12 significant digits (`%.12g`); magnitudes below 1e-14 are
 *    written as `0` so that floating-point residue does not leak into files.
 *  - Row order follows input enumeration, so output is byte-identical for
 *    identical arguments.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ifp/polarization.hpp"
#include "ifp/protocol.hpp"
#include "ifp/scenario.hpp"
#include "ifp/stats.hpp"
#include "ifp/zeno.hpp"

namespace ifp {

inline constexpr std::string_view kVersion = "1.0.0";
inline constexpr int kCsvSchemaVersion = 1;

/// Invalid command-line input (exit status 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File-system failure (exit status 1).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::abs(x) < 1e-14) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Value lists: comma-separated items, each a number, an integer range `a..b`
// or a stepped real range `start:step:stop` (stop inclusive).

inline std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (std::string_view item : detail::split_words(text)) {
    const auto dots = item.find("..");
    try {
      if (dots == std::string_view::npos) {
        out.push_back(detail::parse_number<int>(item, "cycle count", 0));
        continue;
      }
      const int lo = detail::parse_number<int>(item.substr(0, dots), "range start", 0);
      const int hi = detail::parse_number<int>(item.substr(dots + 2), "range end", 0);
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } catch (const ParseError& e) {
      throw UsageError(std::string(e.what()) + " in '" + std::string(text) + "'");
    }
  }
  return out;
}

inline std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  for (std::string_view item : detail::split_words(text)) {
    try {
      const auto c1 = item.find(':');
      if (c1 == std::string_view::npos) {
        out.push_back(detail::parse_number<double>(item, "value", 0));
        continue;
      }
      const auto c2 = item.find(':', c1 + 1);
      if (c2 == std::string_view::npos) throw UsageError("range must be start:step:stop");
      const double start = detail::parse_number<double>(item.substr(0, c1), "range start", 0);
      const double step =
          detail::parse_number<double>(item.substr(c1 + 1, c2 - c1 - 1), "range step", 0);
      const double stop = detail::parse_number<double>(item.substr(c2 + 1), "range stop", 0);
      if (!(step > 0.0)) throw UsageError("range step must be positive");
      if (stop < start) continue;
      const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
      for (long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    } catch (const ParseError& e) {
      throw UsageError(std::string(e.what()) + " in '" + std::string(text) + "'");
    }
  }
  return out;
}

inline std::vector<AbsorberModel> parse_variant_list(std::string_view text) {
  std::vector<AbsorberModel> out;
  for (std::string_view item : detail::split_words(text)) {
    if (item == "all") {
      out.insert(out.end(), kAllAbsorberModels.begin(), kAllAbsorberModels.end());
      continue;
    }
    try {
      out.push_back(parse_absorber_model(item));
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError("no absorber model given");
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepSpec {
  std::vector<int> n_values;
  std::vector<double> p_values;
  std::vector<AbsorberModel> variants{AbsorberModel::Mixture};
  std::filesystem::path output;

  void validate() const {
    if (n_values.empty()) throw UsageError("empty cycle list");
    if (p_values.empty()) throw UsageError("empty block-probability list");
    if (variants.empty()) throw UsageError("empty absorber model list");
    for (int n : n_values) {
      if (n < 1) throw UsageError("cycle counts must be >= 1, got " + std::to_string(n));
    }
    for (double p : p_values) {
      if (!(p >= 0.0 && p <= 1.0)) throw UsageError("block probabilities must lie in [0, 1]");
    }
  }
};

inline void write_zeno_sweep(std::ostream& out, const SweepSpec& spec) {
  spec.validate();
  out << "n,p,variant,p_d0,p_d1,p_abs,discrimination\n";
  for (AbsorberModel v : spec.variants) {
    for (int n : spec.n_values) {
      for (double p : spec.p_values) {
        const RunOutcome o = run_protocol({n, p, v});
        out << n << ',' << format_real(p) << ',' << to_string(v) << ',' << format_real(o.p_d0)
            << ',' << format_real(o.p_d1) << ',' << format_real(o.p_abs) << ','
            << format_real(o.discrimination()) << '\n';
      }
    }
  }
}

inline void write_snr_sweep(std::ostream& out, const std::vector<int>& n_values,
                            const std::vector<AbsorberModel>& variants) {
  if (n_values.empty()) throw UsageError("empty cycle list");
  for (int n : n_values) {
    if (n < 1) throw UsageError("cycle counts must be >= 1, got " + std::to_string(n));
  }
  out << "n,variant,f,g,mean_absorption\n";
  for (AbsorberModel v : variants) {
    for (int n : n_values) {
      const double f = f_factor(n, v);
      const double absorbed = mean_absorption(n, v);
      const double g = g_factor(n, v);
      out << n << ',' << to_string(v) << ',' << format_real(f) << ',' << format_real(g) << ','
          << format_real(absorbed) << '\n';
    }
  }
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

inline void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace detail

inline void cmd_zeno_sweep(const SweepSpec& spec) {
  spec.validate();
  std::ofstream out = detail::open_output(spec.output);
  write_zeno_sweep(out, spec);
  detail::finish_output(out, spec.output);
}

inline void cmd_snr_sweep(const std::vector<int>& n_values,
                          const std::vector<AbsorberModel>& variants,
                          const std::filesystem::path& output) {
  if (n_values.empty()) throw UsageError("empty cycle list");
  std::ofstream out = detail::open_output(output);
  write_snr_sweep(out, n_values, variants);
  detail::finish_output(out, output);
}

// ---------------------------------------------------------------------------
// Heatmaps

/// Minimal SVG heatmap of a per-pixel scalar on [-1, 1] (blue..white..red).
/// NaN pixels are drawn grey.
inline void write_heatmap_svg(std::ostream& out, int width, int height,
                              const std::vector<double>& values, std::string_view title) {
  constexpr int kCell = 32;
  constexpr int kHeader = 24;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width * kCell << "\" height=\""
      << height * kCell + kHeader << "\">\n";
  out << "<text x=\"4\" y=\"16\" font-family=\"sans-serif\" font-size=\"14\">" << title
      << "</text>\n";
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double v = values.at(static_cast<std::size_t>(y) * width + x);
      int r = 160, g = 160, b = 160;
      if (!std::isnan(v)) {
        const double c = std::clamp(v, -1.0, 1.0);
        const int fade = static_cast<int>(std::lround(255.0 * (1.0 - std::abs(c))));
        r = c >= 0.0 ? 255 : fade;
        b = c <= 0.0 ? 255 : fade;
        g = fade;
      }
      out << "<rect x=\"" << x * kCell << "\" y=\"" << y * kCell + kHeader << "\" width=\"" << kCell
          << "\" height=\"" << kCell << "\" fill=\"rgb(" << r << ',' << g << ',' << b
          << ")\"><title>(" << x << ',' << y << ") " << format_real(v) << "</title></rect>\n";
    }
  }
  out << "</svg>\n";
}

// ---------------------------------------------------------------------------
// Scenario runs

struct ScenarioRun {
  CoincidenceTable table;
  ReconstructionResult reconstruction;
  std::vector<std::filesystem::path> files;
};

inline void write_coincidences_csv(std::ostream& out, const CoincidenceTable& table,
                                   const std::vector<Basis>& bases) {
  out << "x,y,basis,herald,probe,iccd0,iccd1,absorbed\n";
  for (int y = 0; y < table.height(); ++y) {
    for (int x = 0; x < table.width(); ++x) {
      for (Basis b : bases) {
        for (Herald h : {Herald::DX, Herald::DY}) {
          const auto& c = table.at(x, y, b, h);
          out << x << ',' << y << ',' << to_string(b) << ',' << to_string(h) << ','
              << to_string(heralded_probe(b, h)) << ',' << c.iccd0 << ',' << c.iccd1 << ','
              << c.absorbed << '\n';
        }
      }
    }
  }
}

inline void write_reconstruction_csv(std::ostream& out, const ReconstructionResult& r) {
  out << "x,y,tau_hat,d1_hat,d2_hat,d3_hat,tau_consistency\n";
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      const DiattenuatorEstimate& e = r.at(x, y).estimate;
      out << x << ',' << y << ',' << format_real(e.tau) << ',' << format_real(e.d[0]) << ','
          << format_real(e.d[1]) << ',' << format_real(e.d[2]) << ','
          << format_real(e.tau_consistency) << '\n';
    }
  }
}

inline void write_modes_csv(std::ostream& out, const ReconstructionResult& r) {
  out << "x,y,probe,p_hat,half_width,clipped\n";
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      for (Probe p : kAllProbes) {
        const BlockEstimate& m = r.at(x, y).modes[index_of(p)];
        out << x << ',' << y << ',' << to_string(p) << ',' << format_real(m.p_hat) << ','
            << format_real(m.half_width) << ',' << (m.clipped ? 1 : 0) << '\n';
      }
    }
  }
}

inline nlohmann::ordered_json run_manifest(const ScenarioConfig& cfg,
                                           const ReconstructionResult& r,
                                           const std::vector<std::string>& outputs) {
  nlohmann::ordered_json m;
  m["tool"] = "ifp";
  m["version"] = std::string(kVersion);
  m["csv_schema"] = kCsvSchemaVersion;
  m["seed"] = cfg.seed;
  m["variant"] = std::string(to_string(cfg.variant));
  m["cycles"] = cfg.n;
  m["pairs_per_mode"] = cfg.pairs_per_mode;
  m["source"] = std::string(to_string(cfg.source));
  std::vector<std::string> bases;
  for (Basis b : cfg.bases) bases.emplace_back(to_string(b));
  m["bases"] = bases;
  m["width"] = cfg.sample.width;
  m["height"] = cfg.sample.height;
  m["clipped_modes"] = r.clipped_modes;
  m["outputs"] = outputs;
  return m;
}

/// Simulates, reconstructs and writes all artifacts into `outdir`.
inline ScenarioRun run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& outdir,
                                bool heatmaps) {
  cfg.validate();
  for (Basis b : kAllBases) {
    if (std::find(cfg.bases.begin(), cfg.bases.end(), b) == cfg.bases.end()) {
      throw UsageError("reconstruction needs all three bases; scenario lacks " +
                       std::string(to_string(b)));
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw IoError("cannot create output directory " + outdir.string() + ": " + ec.message());

  ScenarioRun run;
  run.table = simulate_heralded_run(cfg);
  run.reconstruction = reconstruct_image(run.table, cfg);

  std::vector<std::string> names{"coincidences.csv", "reconstruction.csv", "modes.csv"};
  auto emit = [&](const std::string& name, auto&& writer) {
    const std::filesystem::path path = outdir / name;
    std::ofstream out = detail::open_output(path);
    writer(out);
    detail::finish_output(out, path);
    run.files.push_back(path);
  };
  emit(names[0], [&](std::ostream& o) { write_coincidences_csv(o, run.table, cfg.bases); });
  emit(names[1], [&](std::ostream& o) { write_reconstruction_csv(o, run.reconstruction); });
  emit(names[2], [&](std::ostream& o) { write_modes_csv(o, run.reconstruction); });

  if (heatmaps) {
    const ReconstructionResult& r = run.reconstruction;
    for (int k = 0; k < 3; ++k) {
      std::vector<double> values;
      for (const PixelReconstruction& pix : r.pixels) values.push_back(pix.estimate.d[k]);
      const std::string name = "d" + std::to_string(k + 1) + "_hat.svg";
      names.push_back(name);
      const std::string title = "d" + std::to_string(k + 1) + "_hat (" +
                                std::string(to_string(kAllBases[static_cast<std::size_t>(k)])) +
                                ")";
      emit(name, [&](std::ostream& o) { write_heatmap_svg(o, r.width, r.height, values, title); });
    }
  }

  emit("manifest.json", [&](std::ostream& o) {
    o << run_manifest(cfg, run.reconstruction, names).dump(2) << '\n';
  });
  return run;
}

}  // namespace ifp
