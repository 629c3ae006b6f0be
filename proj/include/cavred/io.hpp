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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cavred/geometry.hpp"
#include "cavred/response.hpp"

namespace cavred::io {

  inline constexpr const char* tool_version = "0.1.0";

  /// Scientific notation with 16 significant digits; "inf", "-inf", "nan".
  std::string format_double(double v);

  std::uint64_t fnv1a(std::string_view data);
  std::string hex64(std::uint64_t v);

  /// Current UTC time, ISO 8601.
  std::string utc_timestamp();

  struct Manifest {
    std::string command;
    std::string config_hash;
    std::string tool_version = io::tool_version;
    std::string timestamp;
    std::vector<std::string> outputs;
  };

  /// Writes manifest.json into dir and returns its path.
  std::filesystem::path write_manifest(const std::filesystem::path& dir, const Manifest& manifest);

  /// Columns: j, multi_index, lambda, weyl_ratio.
  void write_spectrum_csv(std::ostream& out, const geometry::CrossSection& cs,
                          const geometry::SpectrumEnumeration& spectrum);

  struct SubfieldRow {
    std::size_t j = 0;
    geometry::TransverseMode mode;
    double effective_mass = 0.0;
    double norm_squared = 0.0;
    double cumulative_delta_l2 = 0.0;
  };

  /// Columns: j, multi_index, lambda, effective_mass, norm_sq, cumulative_delta_l2.
  void write_subfields_csv(std::ostream& out, const std::vector<SubfieldRow>& rows);

  /// Per-subfield contributions with cumulative relative differences.
  void write_response_csv(std::ostream& out, const response::TransitionResult& result);

} // namespace cavred::io
