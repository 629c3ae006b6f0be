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

#include "cavred/detector.hpp"

#include <algorithm>

namespace cavred::detector {

  using numerics::pi;

  Position Position::polar(double r0, double phi0, double z0) {
    if (!(r0 >= 0.0)) throw DomainError("position: r0 must be non-negative");
    return Position{{r0 * std::cos(phi0), r0 * std::sin(phi0)}, z0};
  }

  Smearing Smearing::gaussian(double sigma, Position center) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("gaussian smearing: sigma must be positive");
    Smearing s;
    s.kind = SmearingKind::gaussian;
    s.sigma = sigma;
    s.center = std::move(center);
    return s;
  }

  Smearing Smearing::pointlike(Position center) {
    Smearing s;
    s.kind = SmearingKind::pointlike;
    s.center = std::move(center);
    return s;
  }

  Smearing Smearing::transverse_mode(geometry::TransverseMode mode, double sigma, double z0) {
    if (!(sigma > 0.0)) throw DomainError("transverse_mode smearing: sigma must be positive");
    Smearing s;
    s.kind = SmearingKind::transverse_mode;
    s.sigma = sigma;
    s.center.z = z0;
    s.mode = std::move(mode);
    return s;
  }

  subfields::SmearingFunction Smearing::function(const geometry::CrossSection& cs) const {
    const double sig = sigma;
    const double z0 = center.z;
    switch (kind) {
      case SmearingKind::gaussian: {
        const std::vector<double> y0 = center.y;
        const int d = cs.dimension();
        if (static_cast<int>(y0.size()) != d) throw DomainError("smearing: centre dimension mismatch");
        const double norm = std::pow(2.0 * pi * sig * sig, -0.5 * (d + 1));
        return [y0, sig, z0, norm](std::span<const double> y, double z) {
          double r2 = (z - z0) * (z - z0);
          for (std::size_t k = 0; k < y0.size(); ++k) r2 += (y[k] - y0[k]) * (y[k] - y0[k]);
          return norm * std::exp(-0.5 * r2 / (sig * sig));
        };
      }
      case SmearingKind::transverse_mode: {
        const geometry::TransverseMode m = mode;
        const double norm = 1.0 / (std::sqrt(2.0 * pi) * sig);
        return [cs, m, sig, z0, norm](std::span<const double> y, double z) {
          const double u = (z - z0) / sig;
          return geometry::evaluate(cs, m, y) * norm * std::exp(-0.5 * u * u);
        };
      }
      case SmearingKind::pointlike: break;
    }
    throw DomainError("smearing: a pointlike profile has no function representation");
  }

  Switching Switching::gaussian(double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("switching: T must be positive");
    return {SwitchingKind::gaussian, T};
  }

  Switching Switching::sudden(double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("switching: T must be positive");
    return {SwitchingKind::sudden, T};
  }

  double Switching::chi(double t) const {
    if (kind == SwitchingKind::gaussian) return std::exp(-0.5 * t * t / (T * T));
    return (t >= 0.0 && t <= T) ? 1.0 : 0.0;
  }

  std::string to_string(Sign s) { return s == Sign::plus ? "plus" : "minus"; }

  std::vector<std::string> DetectorModel::validate(const subfields::CavityField& field) const {
    if (!(gap > 0.0) || !std::isfinite(gap)) throw DomainError("detector: gap must be positive");
    if (!std::isfinite(coupling)) throw DomainError("detector: coupling must be finite");
    if (!(switching.T > 0.0)) throw DomainError("detector: T must be positive");
    std::vector<std::string> warnings;
    const auto& cs = field.cross_section;
    const double L = field.length;
    const double z0 = smearing.center.z;
    if (!(z0 > 0.0 && z0 < L)) throw DomainError("detector: z0 must lie strictly inside (0, L)");
    if (smearing.kind == SmearingKind::transverse_mode) {
      if (smearing.mode.multi_index.size() != static_cast<std::size_t>(cs.dimension()) && !cs.is_disk())
        throw DomainError("detector: synthetic mode does not belong to the cross-section");
    } else {
      if (!cs.contains(smearing.center.y)) throw DomainError("detector: centre lies outside the cross-section");
    }
    if (smearing.kind != SmearingKind::pointlike) {
      const double s = smearing.sigma;
      double transverse_scale = cs.is_disk() ? cs.radius() : *std::min_element(cs.lengths().begin(), cs.lengths().end());
      if (s / transverse_scale > 0.2)
        warnings.push_back("sigma exceeds 0.2 of the transverse size; whole-space Gaussian integrals are inaccurate");
      if (z0 < 8.0 * s || L - z0 < 8.0 * s)
        warnings.push_back("detector lies within 8 sigma of an end wall; axial overlaps are approximate");
      if (smearing.kind == SmearingKind::gaussian) {
        const auto& y0 = smearing.center.y;
        double wall = 0.0;
        if (cs.is_disk()) {
          wall = cs.radius() - std::hypot(y0[0], y0[1]);
        } else {
          wall = std::numeric_limits<double>::infinity();
          for (std::size_t k = 0; k < y0.size(); ++k) wall = std::min({wall, y0[k], cs.lengths()[k] - y0[k]});
        }
        if (wall < 4.0 * s) warnings.push_back("detector lies within 4 sigma of a side wall; transverse overlaps are approximate");
      }
    }
    return warnings;
  }

  // ---------------------------------------------------------------------------

  double log_switching_factor(const Switching& sw, double gap, double omega, Sign sign) {
    if (!(omega > 0.0)) throw DomainError("switching_factor: mode frequency must be positive");
    const double nu = omega + sign_value(sign) * gap;
    const double T = sw.T;
    if (sw.kind == SwitchingKind::gaussian) return std::log(2.0 * pi * T * T) - T * T * nu * nu;
    const double x = nu * T;
    if (std::abs(x) < 1e-4) return std::log(T * T * (1.0 - x * x / 12.0));
    // 2 (1 - cos x) / nu^2 = 4 sin^2(x/2) / nu^2
    const double s = std::sin(0.5 * x);
    if (s == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(4.0) + 2.0 * std::log(std::abs(s)) - 2.0 * std::log(std::abs(nu));
  }

  double switching_factor(const Switching& sw, double gap, double omega, Sign sign) {
    return std::exp(log_switching_factor(sw, gap, omega, sign));
  }

  double transverse_overlap_onaxis(double sigma, double radius, int l) {
    if (!(sigma >= 0.0) || !(radius > 0.0)) throw DomainError("transverse_overlap_onaxis: invalid sigma or R");
    if (sigma >= radius) throw DomainError("transverse_overlap_onaxis: requires sigma < R");
    const double x = numerics::bessel_zero(0, l);
    return std::exp(-sigma * sigma * x * x / (radius * radius));
  }

  namespace {

    // e^{-r0^2/2s^2} int_0^inf r e^{-r^2/2s^2} I_m(r0 r/s^2) J_m(k r) dr / s^2
    double offaxis_amplitude(double sigma, double radius, double r0, int m, int l) {
      const double k = numerics::bessel_zero(m, l) / radius;
      const double s2 = sigma * sigma;
      if (r0 == 0.0) return m == 0 ? std::exp(-0.5 * s2 * k * k) : 0.0;
      auto integrand = [=](double r) {
        const double u = (r - r0) / sigma;
        return std::exp(-0.5 * u * u) * numerics::bessel_i_scaled(m, r0 * r / s2) * r * numerics::bessel_j(m, k * r) / s2;
      };
      // The integrand is below e^{-800} outside r0 +- 40 sigma. Panels of
      // 2 sigma keep the oscillation of J_m resolved on each piece.
      const double a = std::max(0.0, r0 - 40.0 * sigma);
      const double b = r0 + 40.0 * sigma;
      const int pieces = static_cast<int>(std::ceil((b - a) / (2.0 * sigma)));
      numerics::QuadratureSpec spec;
      spec.relative_tolerance = 1e-12;
      spec.absolute_tolerance = 1e-17;
      double total = 0.0;
      for (int p = 0; p < pieces; ++p) {
        const double lo = a + (b - a) * p / pieces;
        const double hi = a + (b - a) * (p + 1) / pieces;
        total += numerics::integrate_1d(integrand, lo, hi, spec);
      }
      return total;
    }

    double disk_norm(double radius, int m, int l) {
      const double x = numerics::bessel_zero(m, l);
      return 1.0 / (std::sqrt(pi) * radius * std::abs(numerics::bessel_j(m + 1, x)));
    }

  } // namespace

  double transverse_overlap_offaxis(double sigma, double radius, double r0, int m, int l) {
    if (!(sigma > 0.0) || !(radius > 0.0) || !(r0 >= 0.0)) throw DomainError("transverse_overlap_offaxis: invalid arguments");
    if (!(r0 + 4.0 * sigma < radius)) throw DomainError("transverse_overlap_offaxis: requires r0 + 4 sigma < R");
    const double h = offaxis_amplitude(sigma, radius, r0, m, l);
    return h * h;
  }

  int max_coupled_angular_order(const geometry::CrossSection& cs, const Smearing& smearing) {
    if (!cs.is_disk()) return -1;
    if (smearing.kind == SmearingKind::transverse_mode) return smearing.mode.multi_index.at(0) == 0 ? 0 : -1;
    return std::hypot(smearing.center.y.at(0), smearing.center.y.at(1)) == 0.0 ? 0 : -1;
  }

  double axial_overlap(double z0, double length, double sigma, int n) {
    if (!(length > 0.0) || !(sigma >= 0.0)) throw DomainError("axial_overlap: invalid arguments");
    if (n < 1) throw DomainError("axial_overlap: n must be >= 1");
    const double s = numerics::sin_pi(n * (z0 / length));
    const double q = n * pi * sigma / length;
    return std::exp(-q * q) * s * s;
  }

  double axial_coefficient(double length, const Smearing& smearing, int n) {
    if (n < 1) throw DomainError("axial_coefficient: n must be >= 1");
    const double q = n * pi * smearing.sigma / length;
    const double damping = smearing.kind == SmearingKind::pointlike ? 1.0 : std::exp(-0.5 * q * q);
    return std::sqrt(2.0 / length) * damping * numerics::sin_pi(n * (smearing.center.z / length));
  }

  double transverse_coefficient(const geometry::CrossSection& cs, const Smearing& smearing,
                                const geometry::TransverseMode& mode) {
    if (smearing.kind == SmearingKind::transverse_mode) {
      const auto& a = smearing.mode;
      return (a.multi_index == mode.multi_index && a.parity == mode.parity) ? 1.0 : 0.0;
    }
    const auto& y0 = smearing.center.y;
    if (smearing.kind == SmearingKind::pointlike) return geometry::evaluate(cs, mode, y0);

    const double sigma = smearing.sigma;
    if (cs.is_rectangle()) {
      const auto& L = cs.lengths();
      double c = 1.0;
      for (std::size_t k = 0; k < L.size(); ++k) {
        const int n = mode.multi_index[k];
        const double q = n * pi * sigma / L[k];
        const double amp = std::sqrt((n == 0 ? 1.0 : 2.0) / L[k]);
        const double t = cs.boundary() == geometry::Boundary::dirichlet ? numerics::sin_pi(n * (y0[k] / L[k]))
                                                                         : numerics::cos_pi(n * (y0[k] / L[k]));
        c *= amp * std::exp(-0.5 * q * q) * t;
        if (c == 0.0) return 0.0;
      }
      return c;
    }

    const double R = cs.radius();
    const int m = mode.multi_index.at(0);
    const int l = mode.multi_index.at(1);
    const double r0 = std::hypot(y0[0], y0[1]);
    if (r0 == 0.0) {
      if (m != 0) return 0.0;
      const double x = numerics::bessel_zero(0, l);
      return std::exp(-0.5 * sigma * sigma * x * x / (R * R)) * disk_norm(R, 0, l);
    }
    if (!(r0 + 4.0 * sigma < R)) throw DomainError("transverse_coefficient: requires r0 + 4 sigma < R");
    const double phi0 = std::atan2(y0[1], y0[0]);
    double angular = 1.0;
    if (m > 0) {
      angular = std::sqrt(2.0) * (mode.parity == geometry::Parity::sin ? std::sin(m * phi0) : std::cos(m * phi0));
      if (angular == 0.0) return 0.0;
    }
    return disk_norm(R, m, l) * angular * offaxis_amplitude(sigma, R, r0, m, l);
  }

} // namespace cavred::detector
