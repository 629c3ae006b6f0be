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

#include "cavred/subfields.hpp"

#include <algorithm>
#include <string>

namespace cavred::subfields {

  using numerics::pi;

  void Units::validate() const {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("units: hbar must be positive");
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("units: c must be positive");
  }

  void CavityField::validate() const {
    units.validate();
    if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("cavity: axial length must be positive");
    if (!(mass >= 0.0) || !std::isfinite(mass)) throw DomainError("cavity: field mass must be non-negative");
  }

  double effective_mass(const CavityField& field, double lambda) {
    if (!(lambda >= 0.0)) throw DomainError("effective_mass: eigenvalue must be non-negative");
    const double mc = field.mass * field.units.c / field.units.hbar;
    return field.units.hbar / field.units.c * std::sqrt(mc * mc + lambda);
  }

  // ---------------------------------------------------------------------------

  SampledProfile::SampledProfile(double z_begin, double spacing, std::vector<double> values)
      : z_begin_(z_begin), spacing_(spacing), values_(std::move(values)) {
    if (!(spacing > 0.0)) throw DomainError("SampledProfile: spacing must be positive");
  }

  double SampledProfile::operator()(double z) const {
    const std::size_t n = values_.size();
    if (n == 0) return 0.0;
    const double u = (z - z_begin_) / spacing_;
    if (u < 0.0 || u > static_cast<double>(n - 1)) return 0.0;
    if (n == 1) return values_[0];
    std::size_t i = std::min(static_cast<std::size_t>(u), n - 2);
    const double t = u - static_cast<double>(i);
    const double p1 = values_[i];
    const double p2 = values_[i + 1];
    const double p0 = i > 0 ? values_[i - 1] : 2.0 * p1 - p2;
    const double p3 = i + 2 < n ? values_[i + 2] : 2.0 * p2 - p1;
    return 0.5 * ((2.0 * p1) + (-p0 + p2) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t * t +
                  (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t * t * t);
  }

  double SampledProfile::norm_squared() const {
    if (values_.size() < 2) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const double w = (i == 0 || i + 1 == values_.size()) ? 0.5 : 1.0;
      s += w * values_[i] * values_[i];
    }
    return s * spacing_;
  }

  std::vector<double> uniform_z_grid(double z0, double sigma, double length) {
    if (!(sigma > 0.0)) throw DomainError("uniform_z_grid: sigma must be positive");
    if (!(length > 0.0)) throw DomainError("uniform_z_grid: length must be positive");
    const double a = std::max(0.0, z0 - 8.0 * sigma);
    const double b = std::min(length, z0 + 8.0 * sigma);
    if (!(b > a)) throw DomainError("uniform_z_grid: detector lies outside the cavity");
    const auto intervals = static_cast<std::size_t>(std::ceil((b - a) / (sigma / 8.0)));
    std::vector<double> grid(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) grid[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(intervals);
    return grid;
  }

  SampledProfile project_smearing(const geometry::CrossSection& cs, const SmearingFunction& F,
                                  const geometry::TransverseMode& mode, const std::vector<double>& z_grid,
                                  const geometry::CubatureSpec& spec) {
    if (z_grid.empty()) throw DomainError("project_smearing: empty z grid");
    std::vector<double> values(z_grid.size());
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
      const double z = z_grid[i];
      auto r = geometry::integrate_over(
          cs, [&](std::span<const double> y) { return F(y, z) * geometry::evaluate(cs, mode, y); }, spec);
      if (!r.converged)
        throw ConvergenceError("project_smearing: transverse cubature did not converge at z = " + std::to_string(z),
                               r.value, r.error);
      values[i] = r.value;
    }
    const double spacing = z_grid.size() > 1 ? z_grid[1] - z_grid[0] : 1.0;
    return SampledProfile(z_grid.front(), spacing, std::move(values));
  }

  double gaussian_disk_profile(double radius, double sigma, double z0, int l, double z) {
    if (!(sigma > 0.0) || !(radius > 0.0)) throw DomainError("gaussian_disk_profile: sigma and R must be positive");
    const double x = numerics::bessel_zero(0, l);
    const double transverse = std::exp(-0.5 * sigma * sigma * x * x / (radius * radius));
    const double dz = (z - z0) / sigma;
    return transverse * std::exp(-0.5 * dz * dz) /
           (std::sqrt(2.0) * pi * sigma * radius * std::abs(numerics::bessel_j(1, x)));
  }

  // ---------------------------------------------------------------------------

  TruncationSet::TruncationSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
    if (indices_.empty()) throw DomainError("truncation set must be nonempty");
    if (indices_.front() < 1) throw DomainError("truncation set indices must be >= 1");
  }

  TruncationSet TruncationSet::first(std::size_t n) {
    if (n < 1) throw DomainError("truncation set must be nonempty");
    std::vector<std::size_t> idx(n);
    for (std::size_t j = 0; j < n; ++j) idx[j] = j + 1;
    return TruncationSet(std::move(idx));
  }

  bool TruncationSet::contains(std::size_t j) const { return std::binary_search(indices_.begin(), indices_.end(), j); }

  TruncatedSmearing::TruncatedSmearing(geometry::CrossSection cs, SmearingFunction full, std::vector<Subfield> kept)
      : cs_(std::move(cs)), full_(std::move(full)), kept_(std::move(kept)) {}

  double TruncatedSmearing::truncated(std::span<const double> y, double z) const {
    double s = 0.0;
    for (const auto& sf : kept_) {
      const double fz = sf.smearing(z);
      if (fz != 0.0) s += fz * geometry::evaluate(cs_, sf.mode, y);
    }
    return s;
  }

  SmearingFunction TruncatedSmearing::truncated_function() const {
    return [self = *this](std::span<const double> y, double z) { return self.truncated(y, z); };
  }

  SmearingFunction TruncatedSmearing::residual_function() const {
    return [self = *this](std::span<const double> y, double z) { return self.residual(y, z); };
  }

  TruncatedSmearing truncate_smearing(const geometry::CrossSection& cs, const SmearingFunction& F,
                                      const std::vector<Subfield>& subfields, const TruncationSet& J) {
    std::vector<Subfield> kept;
    for (std::size_t j : J.indices()) {
      auto it = std::find_if(subfields.begin(), subfields.end(),
                             [j](const Subfield& s) { return s.mode.sorted_index == j; });
      if (it == subfields.end())
        throw DomainError("truncate_smearing: subfield " + std::to_string(j) + " is not available");
      kept.push_back(*it);
    }
    return TruncatedSmearing(cs, F, std::move(kept));
  }

  double l2_relative_error(double norm_squared, std::span<const double> kept_norms_squared) {
    if (!(norm_squared > 0.0)) throw DomainError("l2_relative_error: ||F|| must be positive");
    double kept = 0.0;
    for (double v : kept_norms_squared) kept += v;
    return std::clamp(1.0 - kept / norm_squared, 0.0, 1.0);
  }

  ParsevalTotal parseval_total(std::span<const double> norms_squared, const std::function<double()>& direct,
                               double tail_tolerance) {
    constexpr std::size_t block = 10;
    double total = 0.0;
    double last_block = 0.0;
    for (std::size_t i = 0; i < norms_squared.size(); ++i) {
      if (i % block == 0) last_block = 0.0;
      total += norms_squared[i];
      last_block += norms_squared[i];
    }
    if (total > 0.0 && norms_squared.size() >= block && last_block < tail_tolerance * total) return {total, true};
    return {direct(), false};
  }

  double l2_relative_error(const TruncatedSmearing& truncation, const std::vector<double>& z_grid,
                           const geometry::CubatureSpec& spec) {
    if (z_grid.size() < 2) throw DomainError("l2_relative_error: z grid needs at least two points");
    // Gauss-Legendre on every grid interval, transverse cubature at each node.
    const auto& rule = numerics::gauss_legendre(8);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i + 1 < z_grid.size(); ++i) {
      const double a = z_grid[i], b = z_grid[i + 1];
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double z = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[k];
        const double w = 0.5 * (b - a) * rule.weights[k];
        const auto& cs = truncation.cross_section();
        auto rn = geometry::integrate_over(
            cs, [&](std::span<const double> y) {
              const double r = truncation.residual(y, z);
              return r * r;
            },
            spec);
        auto rd = geometry::integrate_over(
            cs, [&](std::span<const double> y) {
              const double f = truncation.full(y, z);
              return f * f;
            },
            spec);
        num += w * rn.value;
        den += w * rd.value;
      }
    }
    if (!(den > 0.0)) throw DomainError("l2_relative_error: ||F|| must be positive");
    return num / den;
  }

} // namespace cavred::subfields
