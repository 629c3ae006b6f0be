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
#include <string>
#include <vector>

#include "cavred/numerics.hpp"

namespace cavred::geometry {

  enum class Boundary { dirichlet, neumann };

  /// Angular factor of a disk mode. Rectangles and m = 0 disk modes use none.
  enum class Parity { none, cos, sin };

  std::string to_string(Boundary b);
  std::string to_string(Parity p);

  /// Transverse domain. Rectangles are [0, L_1] x ... x [0, L_d]; the disk is
  /// centred at the origin. Points are always passed in Cartesian form.
  class CrossSection {
  public:
    /// The unit square with Dirichlet walls.
    CrossSection() = default;

    static CrossSection rectangle(std::vector<double> lengths, Boundary boundary = Boundary::dirichlet);
    /// Only Dirichlet is available on the disk.
    static CrossSection disk(double radius, Boundary boundary = Boundary::dirichlet);

    bool is_rectangle() const { return !is_disk_; }
    bool is_disk() const { return is_disk_; }
    Boundary boundary() const { return boundary_; }
    int dimension() const;
    /// d-volume |Gamma|.
    double volume() const;

    const std::vector<double>& lengths() const;
    double radius() const;

    bool contains(std::span<const double> y) const;

  private:
    bool is_disk_ = false;
    Boundary boundary_ = Boundary::dirichlet;
    std::vector<double> lengths_ = {1.0, 1.0};
    double radius_ = 0.0;
  };

  struct TransverseMode {
    std::size_t sorted_index = 0; ///< 1-based position in an enumeration, 0 if standalone
    std::vector<int> multi_index; ///< (n_1..n_d) or (m, l)
    Parity parity = Parity::none;
    double eigenvalue = 0.0;
    double norm_constant = 0.0; ///< amplitude of the normalized eigenfunction
  };

  /// Strict weak order used everywhere: eigenvalue, then multi-index, then parity.
  bool mode_less(const TransverseMode& a, const TransverseMode& b);

  /// "1 2" for rectangles, "0 1" or "2 3 sin" for the disk.
  std::string format_multi_index(const TransverseMode& mode);

  TransverseMode rectangle_eigenpair(const std::vector<double>& lengths, const std::vector<int>& indices,
                                     Boundary boundary);

  TransverseMode disk_eigenpair(double radius, int m, int l, Parity parity);

  /// psi(y) for a mode belonging to cs.
  double evaluate(const CrossSection& cs, const TransverseMode& mode, std::span<const double> y);

  /// Disk modes in polar coordinates.
  double evaluate_polar(double radius, const TransverseMode& mode, double r, double phi);

  struct SpectrumEnumeration {
    std::vector<TransverseMode> modes;
    double cutoff_eigenvalue = 0.0;
  };

  struct EnumerationOptions {
    std::size_t max_modes = 5'000'000;
    /// Disk only: restrict to m <= max_angular_order (negative = no limit).
    /// Used when the smearing provably decouples higher orders.
    int max_angular_order = -1;
  };

  /// Every eigenpair with lambda <= cutoff, counted with multiplicity and sorted
  /// by mode_less. Throws DomainError when more than max_modes would be produced.
  SpectrumEnumeration enumerate_spectrum(const CrossSection& cs, double cutoff, const EnumerationOptions& options = {});

  /// The first count modes in sorted order. The cutoff grows geometrically
  /// from the Weyl estimate until enough modes are found.
  SpectrumEnumeration enumerate_first(const CrossSection& cs, std::size_t count, const EnumerationOptions& options = {});

  /// 4 pi^2 (j / (V_d |Gamma|))^{2/d}.
  double weyl_estimate(const CrossSection& cs, std::size_t j);

  /// Unit-ball volume in d dimensions.
  double unit_ball_volume(int d);

  struct CubatureSpec {
    int order = 20;          ///< Gauss-Legendre points per panel and direction
    int initial_panels = 2;  ///< per direction
    int max_panels = 64;
    double relative_tolerance = 1e-10;
    double absolute_tolerance = 1e-14;
  };

  struct CubatureResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
  };

  /// Tensor Gauss-Legendre cubature of f over cs (polar grid on the disk).
  /// The panel count doubles until two successive estimates agree.
  CubatureResult integrate_over(const CrossSection& cs, const std::function<double(std::span<const double>)>& f,
                                const CubatureSpec& spec = {});

} // namespace cavred::geometry
