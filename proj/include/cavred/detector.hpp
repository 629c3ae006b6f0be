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

#include <string>
#include <vector>

#include "cavred/geometry.hpp"
#include "cavred/subfields.hpp"

namespace cavred::detector {

  /// Detector position. y is Cartesian in the cross-section frame (disk
  /// centred at the origin).
  struct Position {
    std::vector<double> y;
    double z = 0.0;

    static Position polar(double r0, double phi0, double z0);
  };

  enum class SmearingKind { gaussian, pointlike, transverse_mode };

  /// Spatial profile. `gaussian` is the L1-normalized isotropic Gaussian of
  /// width sigma in all directions. `transverse_mode` is the synthetic profile
  /// psi_mode(y) g(z) with g the normalized axial Gaussian of width sigma.
  struct Smearing {
    SmearingKind kind = SmearingKind::gaussian;
    double sigma = 0.0;
    Position center;
    geometry::TransverseMode mode;

    static Smearing gaussian(double sigma, Position center);
    static Smearing pointlike(Position center);
    static Smearing transverse_mode(geometry::TransverseMode mode, double sigma, double z0);

    /// F(y, z) for numerical projection. Not available for pointlike.
    subfields::SmearingFunction function(const geometry::CrossSection& cs) const;
  };

  enum class SwitchingKind { gaussian, sudden };

  struct Switching {
    SwitchingKind kind = SwitchingKind::gaussian;
    double T = 1.0;

    static Switching gaussian(double T);
    static Switching sudden(double T);

    /// chi(t): exp(-t^2 / (2 T^2)) or the indicator of [0, T].
    double chi(double t) const;
  };

  enum class InitialState { ground, excited };

  /// + for excitation, - for de-excitation.
  enum class Sign { plus = 1, minus = -1 };

  inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }
  inline Sign opposite(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }
  std::string to_string(Sign s);

  struct DetectorModel {
    double gap = 1.0; ///< Omega
    double coupling = 1.0;
    Smearing smearing;
    Switching switching;
    InitialState initial_state = InitialState::ground;

    Sign sign() const { return initial_state == InitialState::ground ? Sign::plus : Sign::minus; }

    /// Throws DomainError on hard violations. Returns human-readable warnings
    /// for soft ones (a Gaussian too wide to treat its integrals as whole-space).
    std::vector<std::string> validate(const subfields::CavityField& field) const;
  };

  /// |integral chi(t) exp(i nu t) dt|^2 with nu = omega + sign * gap.
  double switching_factor(const Switching& sw, double gap, double omega, Sign sign);

  /// log of switching_factor; -inf where it vanishes exactly.
  double log_switching_factor(const Switching& sw, double gap, double omega, Sign sign);

  /// exp(-sigma^2 x_{0l}^2 / R^2): squared transverse factor of an on-axis Gaussian.
  double transverse_overlap_onaxis(double sigma, double radius, int l);

  /// exp(-r0^2 / sigma^2) |int_0^inf r exp(-r^2/2sigma^2)/sigma^2 I_m(r0 r/sigma^2) J_m(x_{ml} r/R) dr|^2,
  /// evaluated with the exponentially scaled I_m so nothing overflows.
  /// Requires r0 + 4 sigma < R.
  double transverse_overlap_offaxis(double sigma, double radius, double r0, int m, int l);

  /// exp(-(n pi sigma/L)^2) sin^2(n pi z0/L). sigma = 0 gives the pointlike value.
  double axial_overlap(double z0, double length, double sigma, int n);

  /// Overlap of the transverse part of the smearing with psi_j. Closed form
  /// for every supported geometry; the Gaussian integrals are extended to the
  /// whole plane.
  double transverse_coefficient(const geometry::CrossSection& cs, const Smearing& smearing,
                                const geometry::TransverseMode& mode);

  /// 0 when the smearing is axisymmetric on a disk (only m = 0 modes couple),
  /// -1 (no restriction) otherwise.
  int max_coupled_angular_order(const geometry::CrossSection& cs, const Smearing& smearing);

  /// Overlap of the axial part with sqrt(2/L) sin(n pi z/L).
  double axial_coefficient(double length, const Smearing& smearing, int n);

} // namespace cavred::detector
