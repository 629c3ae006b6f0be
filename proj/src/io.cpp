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

#include "cavred/io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>

#include "json.hpp"

#include "cavred/analysis.hpp"

namespace cavred::io {

  std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15e", v);
    return buf;
  }

  std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : data) {
      h ^= ch;
      h *= 1099511628211ull;
    }
    return h;
  }

  std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
  }

  std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  std::filesystem::path write_manifest(const std::filesystem::path& dir, const Manifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["config_hash"] = m.config_hash;
    j["tool_version"] = m.tool_version;
    j["timestamp"] = m.timestamp;
    j["outputs"] = m.outputs;
    const auto path = dir / "manifest.json";
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(2) << '\n';
    return path;
  }

  void write_spectrum_csv(std::ostream& out, const geometry::CrossSection& cs,
                          const geometry::SpectrumEnumeration& spectrum) {
    out << "j,multi_index,lambda,weyl_ratio\n";
    for (const auto& m : spectrum.modes)
      out << m.sorted_index << ',' << geometry::format_multi_index(m) << ',' << format_double(m.eigenvalue) << ','
          << format_double(m.eigenvalue / geometry::weyl_estimate(cs, m.sorted_index)) << '\n';
  }

  void write_subfields_csv(std::ostream& out, const std::vector<SubfieldRow>& rows) {
    out << "j,multi_index,lambda,effective_mass,norm_sq,cumulative_delta_l2\n";
    for (const auto& r : rows)
      out << r.j << ',' << geometry::format_multi_index(r.mode) << ',' << format_double(r.mode.eigenvalue) << ','
          << format_double(r.effective_mass) << ',' << format_double(r.norm_squared) << ','
          << format_double(r.cumulative_delta_l2) << '\n';
  }

  void write_response_csv(std::ostream& out, const response::TransitionResult& result) {
    out << "position,multi_index,effective_mass,contribution_plus,contribution_minus,log10_contribution_plus,"
           "log10_contribution_minus,cumulative_delta_plus,cumulative_delta_minus\n";
    const std::size_t n = result.per_subfield.size();
    std::vector<double> dp(n, 0.0), dm(n, 0.0);
    if (n > 0 && std::isfinite(result.log_P_plus) && std::isfinite(result.log_P_minus)) {
      const auto cp = analysis::convergence_curve(result, detector::Sign::plus, n, result.ordering);
      const auto cm = analysis::convergence_curve(result, detector::Sign::minus, n, result.ordering);
      for (std::size_t i = 0; i < n; ++i) {
        dp[i] = cp.points[i].delta;
        dm[i] = cm.points[i].delta;
      }
    }
    constexpr double ln10 = 2.302585092994045684;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = result.per_subfield[i];
      out << c.position << ',' << geometry::format_multi_index(c.mode) << ',' << format_double(c.effective_mass) << ','
          << format_double(c.plus()) << ',' << format_double(c.minus()) << ',' << format_double(c.log_plus / ln10)
          << ',' << format_double(c.log_minus / ln10) << ',' << format_double(dp[i]) << ',' << format_double(dm[i])
          << '\n';
    }
  }

} // namespace cavred::io
