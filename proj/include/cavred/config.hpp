// Copyright (c) 2026 The cavred authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0.txt
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cavred/response.hpp"

/// Scenario configuration files.
///
/// The text format has five sections and `key = value` lines:
///
///     [units]      length_unit (required), hbar, c
///     [geometry]   shape = rectangle | disk, lengths (comma list) or R, L, boundary
///     [field]      mass, state = vacuum | thermal, beta
///     [detector]   gap, coupling, smearing = gaussian | pointlike | mode, sigma,
///                  position (rectangle, comma list) or r0, phi0 (disk), z0,
///                  mode (multi-index for smearing = mode), switching = gaussian | sudden,
///                  T, initial_state = ground | excited
///     [numerics]   n_max, tail_tolerance, max_subfields, ordering, cutoff, n_subfields
///
/// `#` starts a comment. The same schema is accepted as a JSON object of
/// objects. Errors name the offending key as "section.key".
namespace cavred::config {

  struct Entry {
    std::string value;
    int line = 0;
  };

  /// Raw key/value pairs addressed as "section.key".
  using RawConfig = std::map<std::string, Entry>;

  struct ScenarioConfig {
    std::string length_unit;
    response::Scenario scenario;
    response::ModeSumControls controls;
    double spectrum_cutoff = 0.0; ///< 0 when not given
    std::size_t n_subfields = 30;
    RawConfig raw;
    std::vector<std::string> warnings;

    /// FNV-1a hash of the canonical JSON form; insensitive to layout and comments.
    std::string hash() const;
    std::string canonical_json() const;
  };

  RawConfig parse_text(const std::string& text);
  RawConfig parse_json(const std::string& text);

  /// Builds and validates a scenario. Throws ConfigError naming the field.
  ScenarioConfig build(const RawConfig& raw);

  ScenarioConfig load(const std::filesystem::path& path);
  ScenarioConfig from_text(const std::string& text);

  /// Named parameter sets: superconducting, optical, fig2-yellow, fig2-green,
  /// fig3, fig4.
  RawConfig preset(const std::string& name);
  std::vector<std::string> preset_names();

  /// Applies "section.key=value" on top of raw.
  void apply_override(RawConfig& raw, const std::string& assignment);

} // namespace cavred::config
