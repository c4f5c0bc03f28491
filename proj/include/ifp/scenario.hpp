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
 * @file scenario.hpp
 * @brief Text formats for samples and scenarios, plus bundled presets.
 *
 * Sample file (`.sample`), one record per line, `#` starts a comment:
 *
 *     width 8
 *     height 8
 *     0.5 0.5 -0.5 0      # tau d1 d2 d3, width*height records, row-major
 *
 * Scenario file (`.cfg`), INI-style sections:
 *
 *     [protocol]
 *     cycles = 10                 # n >= 1
 *     variant = mixture           # mixture | damping | runwise
 *     bases = HV DA RL            # any non-empty subset
 *     seed = 42
 *
 *     [source]
 *     kind = poisson              # poisson | thermal
 *     pairs_per_mode = 10000
 *
 *     [sample]
 *     preset = metasurface_demo   # or: transparent (needs width/height)
 *     file = pixels.sample        # or: a sample file, relative to the cfg
 *     width = 1                   # or: inline records, one `pixel` per line
 *     height = 1
 *     pixel = 0.5 0.6 0 0
 *
 * Exactly one of preset, file or inline pixels defines the sample.
 */
#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdlib>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ifp/errors.hpp"
#include "ifp/polarization.hpp"
#include "ifp/protocol.hpp"

namespace ifp {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::string_view strip_comment(std::string_view s) {
  const auto hash = s.find('#');
  return trim(hash == std::string_view::npos ? s : s.substr(0, hash));
}

inline std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != ',') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
T parse_number(std::string_view text, std::string_view what, int line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("invalid value '" + std::string(text) + "' for " + std::string(what), line);
  }
  return value;
}

inline Diattenuator parse_pixel(const std::vector<std::string_view>& words, int line) {
  if (words.size() != 4) throw ParseError("pixel record needs 4 values: tau d1 d2 d3", line);
  std::array<double, 4> v{};
  for (std::size_t i = 0; i < 4; ++i) v[i] = parse_number<double>(words[i], "pixel", line);
  try {
    return Diattenuator(v[0], v[1], v[2], v[3]);
  } catch (const DomainError& e) {
    throw ParseError(e.what(), line);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sample files

inline SampleModel read_sample(std::istream& in) {
  int width = 0;
  int height = 0;
  std::vector<Diattenuator> pixels;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = detail::strip_comment(raw);
    if (text.empty()) continue;
    const auto words = detail::split_words(text);
    if (words[0] == "width" || words[0] == "height") {
      if (!pixels.empty()) throw ParseError("header after pixel records", line);
      if (words.size() != 2) throw ParseError(std::string(words[0]) + " takes one value", line);
      const int v = detail::parse_number<int>(words[1], words[0], line);
      if (v < 1) throw ParseError(std::string(words[0]) + " must be positive", line);
      (words[0] == "width" ? width : height) = v;
      continue;
    }
    if (width == 0 || height == 0) throw ParseError("pixel record before width/height header", line);
    pixels.push_back(detail::parse_pixel(words, line));
  }
  if (width == 0 || height == 0) throw ParseError("sample file lacks width/height header", 0);
  if (pixels.size() != static_cast<std::size_t>(width) * height) {
    throw ParseError("sample has " + std::to_string(pixels.size()) + " pixel records, expected " +
                         std::to_string(width * height),
                     0);
  }
  SampleModel s;
  s.width = width;
  s.height = height;
  s.pixels = std::move(pixels);
  return s;
}

inline void write_sample(std::ostream& out, const SampleModel& s) {
  out << "width " << s.width << "\nheight " << s.height << "\n";
  char buf[128];
  for (const Diattenuator& d : s.pixels) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", d.tau(), d.d()[0], d.d()[1],
                  d.d()[2]);
    out << buf;
  }
}

// ---------------------------------------------------------------------------
// Presets

/// The two binary images encoded by the metasurface demo: a plus sign in the
/// H/V diattenuation and a square ring in the D/A diattenuation.
struct MetasurfaceImages {
  static constexpr int kSize = 8;
  std::array<std::array<bool, kSize>, kSize> hv{};
  std::array<std::array<bool, kSize>, kSize> da{};
};

inline MetasurfaceImages metasurface_demo_images() {
  MetasurfaceImages img;
  for (int y = 0; y < MetasurfaceImages::kSize; ++y) {
    for (int x = 0; x < MetasurfaceImages::kSize; ++x) {
      img.hv[y][x] = x == 3 || x == 4 || y == 3 || y == 4;
      const int ring = std::max(std::abs(2 * x - 7), std::abs(2 * y - 7));
      img.da[y][x] = ring == 3 || ring == 5;
    }
  }
  return img;
}

/// tau = 0.5 and d = (+-0.5, +-0.5, 0) with signs taken from the two images.
inline SampleModel metasurface_demo_sample() {
  const MetasurfaceImages img = metasurface_demo_images();
  SampleModel s(MetasurfaceImages::kSize, MetasurfaceImages::kSize);
  for (int y = 0; y < s.height; ++y) {
    for (int x = 0; x < s.width; ++x) {
      s.at(x, y) = Diattenuator(0.5, img.hv[y][x] ? 0.5 : -0.5, img.da[y][x] ? 0.5 : -0.5, 0.0);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Scenario files

namespace detail {

struct ScenarioEntry {
  std::string value;
  int line = 0;
};

inline const std::map<std::string, std::vector<std::string>, std::less<>>& scenario_schema() {
  static const std::map<std::string, std::vector<std::string>, std::less<>> schema{
      {"protocol", {"cycles", "variant", "bases", "seed"}},
      {"source", {"kind", "pairs_per_mode"}},
      {"sample", {"preset", "file", "width", "height", "pixel"}},
  };
  return schema;
}

}  // namespace detail

/// Parses a scenario. Relative sample paths resolve against `base_dir`.
inline ScenarioConfig parse_scenario(std::istream& in,
                                     const std::filesystem::path& base_dir = {}) {
  const auto& schema = detail::scenario_schema();
  std::map<std::string, detail::ScenarioEntry> scalars;  // "section.key"
  std::vector<detail::ScenarioEntry> inline_pixels;
  std::string section;
  std::string raw;
  int line = 0;

  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = detail::strip_comment(raw);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ParseError("malformed section header", line);
      section = std::string(detail::trim(text.substr(1, text.size() - 2)));
      if (!schema.contains(section)) throw ParseError("unknown section [" + section + "]", line);
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line);
    const std::string key(detail::trim(text.substr(0, eq)));
    const std::string value(detail::trim(text.substr(eq + 1)));
    if (section.empty()) throw ParseError("key '" + key + "' outside any section", line);
    const auto& keys = schema.find(section)->second;
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ParseError("unknown key '" + key + "' in [" + section + "]", line);
    }
    if (value.empty()) throw ParseError("empty value for key '" + key + "'", line);
    if (section == "sample" && key == "pixel") {
      inline_pixels.push_back({value, line});
      continue;
    }
    const std::string full = section + "." + key;
    if (scalars.contains(full)) throw ParseError("duplicate key '" + key + "'", line);
    scalars[full] = {value, line};
  }

  auto find = [&](const std::string& full) -> const detail::ScenarioEntry* {
    const auto it = scalars.find(full);
    return it == scalars.end() ? nullptr : &it->second;
  };
  auto require = [&](const std::string& full) -> const detail::ScenarioEntry& {
    const detail::ScenarioEntry* e = find(full);
    if (e == nullptr) throw ParseError("missing required key '" + full + "'", 0);
    return *e;
  };
  auto wrap = [](const detail::ScenarioEntry& e, auto&& fn) {
    try {
      return fn(e.value);
    } catch (const DomainError& err) {
      throw ParseError(err.what(), e.line);
    }
  };

  ScenarioConfig cfg;
  {
    const auto& e = require("protocol.cycles");
    cfg.n = detail::parse_number<int>(e.value, "cycles", e.line);
    if (cfg.n < 1) throw ParseError("cycles must be >= 1", e.line);
  }
  if (const auto* e = find("protocol.variant")) {
    cfg.variant = wrap(*e, [](const std::string& v) { return parse_absorber_model(v); });
  }
  if (const auto* e = find("protocol.seed")) {
    cfg.seed = detail::parse_number<std::uint64_t>(e->value, "seed", e->line);
  }
  if (const auto* e = find("protocol.bases")) {
    cfg.bases.clear();
    for (std::string_view w : detail::split_words(e->value)) {
      cfg.bases.push_back(wrap(*e, [&](const std::string&) { return parse_basis(w); }));
    }
  }
  if (const auto* e = find("source.kind")) {
    cfg.source = wrap(*e, [](const std::string& v) { return parse_source_kind(v); });
  }
  {
    const auto& e = require("source.pairs_per_mode");
    cfg.pairs_per_mode = detail::parse_number<double>(e.value, "pairs_per_mode", e.line);
    if (!(cfg.pairs_per_mode > 0.0)) throw ParseError("pairs_per_mode must be > 0", e.line);
  }

  const auto* preset = find("sample.preset");
  const auto* file = find("sample.file");
  const int sources = (preset != nullptr) + (file != nullptr) + (!inline_pixels.empty());
  if (sources != 1) {
    throw ParseError("[sample] needs exactly one of preset, file or pixel records", 0);
  }
  auto dims = [&]() {
    const auto& w = require("sample.width");
    const auto& h = require("sample.height");
    const int width = detail::parse_number<int>(w.value, "width", w.line);
    const int height = detail::parse_number<int>(h.value, "height", h.line);
    if (width < 1) throw ParseError("width must be positive", w.line);
    if (height < 1) throw ParseError("height must be positive", h.line);
    return std::pair{width, height};
  };

  if (preset != nullptr) {
    if (preset->value == "metasurface_demo") {
      cfg.sample = metasurface_demo_sample();
    } else if (preset->value == "transparent") {
      const auto [w, h] = dims();
      cfg.sample = SampleModel(w, h);
    } else {
      throw ParseError("unknown preset '" + preset->value + "'", preset->line);
    }
  } else if (file != nullptr) {
    const std::filesystem::path path = base_dir / file->value;
    std::ifstream sample_in(path);
    if (!sample_in) throw ParseError("cannot open sample file " + path.string(), file->line);
    try {
      cfg.sample = read_sample(sample_in);
    } catch (const ParseError& err) {
      throw err.with_context(path.string());
    }
  } else {
    const auto [w, h] = dims();
    if (inline_pixels.size() != static_cast<std::size_t>(w) * h) {
      throw ParseError("expected " + std::to_string(w * h) + " pixel records, found " +
                           std::to_string(inline_pixels.size()),
                       inline_pixels.back().line);
    }
    cfg.sample.width = w;
    cfg.sample.height = h;
    for (const auto& e : inline_pixels) {
      cfg.sample.pixels.push_back(detail::parse_pixel(detail::split_words(e.value), e.line));
    }
  }

  try {
    cfg.validate();
  } catch (const DomainError& err) {
    throw ParseError(err.what(), 0);
  }
  return cfg;
}

inline ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path.string(), 0);
  try {
    return parse_scenario(in, path.parent_path());
  } catch (const ParseError& err) {
    throw err.with_context(path.string());
  }
}

}  // namespace ifp
