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
#include <functional>
#include <span>
#include <vector>

#include "cavred/geometry.hpp"

/// Decomposition of the cavity field into 1+1 dimensional subfields, one per
/// transverse mode, and truncation of a detector smearing to a subset of them.
namespace cavred::subfields {

  struct Units {
    double hbar = 1.0;
    double c = 1.0;
    void validate() const;
  };

  /// Cavity of cross-section Gamma extended over z in [0, L], Dirichlet at both ends.
  struct CavityField {
    geometry::CrossSection cross_section;
    double length = 1.0;
    double mass = 0.0;
    Units units;

    void validate() const;
  };

  /// (hbar / c) sqrt(M^2 c^2 / hbar^2 + lambda).
  double effective_mass(const CavityField& field, double lambda);

  /// Smearing F(y, z) with y in Cartesian transverse coordinates.
  using SmearingFunction = std::function<double(std::span<const double>, double)>;

  /// Values on a uniform grid, Catmull-Rom interpolated inside and zero outside.
  class SampledProfile {
  public:
    SampledProfile() = default;
    SampledProfile(double z_begin, double spacing, std::vector<double> values);

    double operator()(double z) const;

    double z_begin() const { return z_begin_; }
    double spacing() const { return spacing_; }
    const std::vector<double>& values() const { return values_; }

    /// Trapezoidal estimate of the integral of the squared profile.
    double norm_squared() const;

  private:
    double z_begin_ = 0.0;
    double spacing_ = 1.0;
    std::vector<double> values_;
  };

  /// Uniform grid with spacing sigma / 8 (or finer) over [z0 - 8 sigma, z0 + 8 sigma],
  /// clipped to [0, L].
  std::vector<double> uniform_z_grid(double z0, double sigma, double length);

  /// F_j(z) = integral over Gamma of F(y, z) psi_j(y), evaluated at each grid
  /// point by tensor cubature. Throws ConvergenceError if the cubature does not
  /// settle. The grid must be uniform.
  SampledProfile project_smearing(const geometry::CrossSection& cs, const SmearingFunction& F,
                                  const geometry::TransverseMode& mode, const std::vector<double>& z_grid,
                                  const geometry::CubatureSpec& spec = {});

  /// Effective smearing of the (0, l) disk subfield for an axis-centred
  /// Gaussian of width sigma at height z0, with the radial integral extended
  /// to infinity.
  double gaussian_disk_profile(double radius, double sigma, double z0, int l, double z);

  struct Subfield {
    geometry::TransverseMode mode;
    double effective_mass = 0.0;
    std::function<double(double)> smearing;
    double smearing_norm_squared = 0.0;
  };

  /// Sorted, duplicate-free set of 1-based subfield indices.
  class TruncationSet {
  public:
    explicit TruncationSet(std::vector<std::size_t> indices);
    /// {1, ..., n}
    static TruncationSet first(std::size_t n);

    bool contains(std::size_t j) const;
    const std::vector<std::size_t>& indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }

  private:
    std::vector<std::size_t> indices_;
  };

  /// F_tr = sum over j in J of F_j(z) psi_j(y) and its residual F - F_tr.
  class TruncatedSmearing {
  public:
    TruncatedSmearing(geometry::CrossSection cs, SmearingFunction full, std::vector<Subfield> kept);

    double full(std::span<const double> y, double z) const { return full_(y, z); }
    double truncated(std::span<const double> y, double z) const;
    double residual(std::span<const double> y, double z) const { return full(y, z) - truncated(y, z); }

    SmearingFunction truncated_function() const;
    SmearingFunction residual_function() const;
    const std::vector<Subfield>& kept() const { return kept_; }
    const geometry::CrossSection& cross_section() const { return cs_; }

  private:
    geometry::CrossSection cs_;
    SmearingFunction full_;
    std::vector<Subfield> kept_;
  };

  /// Keeps the subfields whose mode.sorted_index lies in J. Throws DomainError
  /// when J names an index that is not available.
  TruncatedSmearing truncate_smearing(const geometry::CrossSection& cs, const SmearingFunction& F,
                                      const std::vector<Subfield>& subfields, const TruncationSet& J);

  /// ||F - F_tr||^2 / ||F||^2 from the Parseval identity, given ||F||^2 and
  /// the squared norms ||F_j||^2 of the kept subfields. Clamped to [0, 1].
  double l2_relative_error(double norm_squared, std::span<const double> kept_norms_squared);

  struct ParsevalTotal {
    double value = 0.0;
    bool from_parseval = false; ///< false when the direct cubature fallback was used
  };

  /// ||F||^2 as the sum of ||F_j||^2 over a sorted list of subfields, accepted
  /// once the last block contributes below tail_tolerance of the running sum;
  /// otherwise `direct` is called.
  ParsevalTotal parseval_total(std::span<const double> norms_squared, const std::function<double()>& direct,
                               double tail_tolerance = 1e-8);

  /// Direct route: ||F - F_tr||^2 / ||F||^2 by cubature over Gamma and the
  /// z grid.
  double l2_relative_error(const TruncatedSmearing& truncation, const std::vector<double>& z_grid,
                           const geometry::CubatureSpec& spec = {});

} // namespace cavred::subfields
