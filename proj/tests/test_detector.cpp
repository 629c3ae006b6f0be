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

#include "doctest.h"

#include <cmath>

#include "cavred/detector.hpp"
#include "oracles.hpp"

using namespace cavred;
using namespace cavred::detector;
using geometry::CrossSection;
using numerics::pi;

namespace {

  // |int chi(t) e^{i nu t} dt|^2 by composite quadrature of the real and imaginary parts.
  double switching_oracle(const Switching& sw, double nu) {
    long double a, b;
    int panels;
    if (sw.kind == SwitchingKind::gaussian) {
      a = -12 * sw.T;
      b = 12 * sw.T;
      panels = 400 + static_cast<int>(std::abs(nu) * sw.T * 8);
    } else {
      a = 0;
      b = sw.T;
      panels = 200 + static_cast<int>(std::abs(nu) * sw.T * 4);
    }
    const long double re = oracle::composite_gl5([&](long double t) { return sw.chi(t) * std::cos(nu * t); }, a, b, panels);
    const long double im = oracle::composite_gl5([&](long double t) { return sw.chi(t) * std::sin(nu * t); }, a, b, panels);
    return static_cast<double>(re * re + im * im);
  }

  // Integral of the 2-D normalized Gaussian at y0 against psi over the cross-section.
  double coefficient_oracle(const CrossSection& cs, const geometry::TransverseMode& mode, std::vector<double> y0,
                            double sigma) {
    geometry::CubatureSpec spec;
    spec.max_panels = 256;
    spec.initial_panels = 8;
    const auto r = geometry::integrate_over(
        cs,
        [&](std::span<const double> y) {
          const double r2 = std::pow(y[0] - y0[0], 2) + std::pow(y[1] - y0[1], 2);
          return std::exp(-0.5 * r2 / (sigma * sigma)) / (2 * pi * sigma * sigma) * geometry::evaluate(cs, mode, y);
        },
        spec);
    return r.value;
  }

} // namespace

TEST_SUITE("detector") {

  TEST_CASE("switching factors match quadrature over random draws") {
    oracle::Rng rng(5);
    for (int draw = 0; draw < 20; ++draw) {
      const double T = rng.uniform(0.2, 5.0);
      const double gap = rng.uniform(0.1, 3.0);
      const double omega = rng.uniform(0.05, 3.0);
      const Sign s = rng.integer(0, 1) ? Sign::plus : Sign::minus;
      const double nu = omega + sign_value(s) * gap;
      for (const auto& sw : {Switching::gaussian(T), Switching::sudden(T)}) {
        const double ref = switching_oracle(sw, nu);
        if (ref < 1e-200) continue;
        CHECK(switching_factor(sw, gap, omega, s) == doctest::Approx(ref).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("sudden switching near resonance and at zeros") {
    const auto sw = Switching::sudden(2.0);
    CHECK(switching_factor(sw, 1.0, 1.0, Sign::minus) == doctest::Approx(4.0));
    CHECK(switching_factor(sw, 1.0, 1.0 + 1e-7, Sign::minus) == doctest::Approx(4.0).epsilon(1e-12));
    // nu T = 2 pi is an exact zero of the factor.
    CHECK(switching_factor(sw, 0.5, 0.5 + pi, Sign::minus) < 1e-28);
    CHECK(log_switching_factor(Switching::gaussian(100.0), 1.0, 2.0, Sign::plus) ==
          doctest::Approx(std::log(2 * pi * 1e4) - 9e4));
    CHECK_THROWS_AS(switching_factor(sw, 1.0, 0.0, Sign::plus), DomainError);
  }

  TEST_CASE("on-axis disk overlap equals the squared Hankel transform") {
    for (double sigma : {0.01, 0.1})
      for (int l : {1, 3}) {
        const double k = numerics::bessel_zero(0, l);
        const double h = numerics::integrate_1d(
            [&](double r) { return r * std::exp(-0.5 * r * r / (sigma * sigma)) / (sigma * sigma) * numerics::bessel_j(0, k * r); },
            0.0, 40 * sigma);
        CHECK(transverse_overlap_onaxis(sigma, 1.0, l) == doctest::Approx(h * h).epsilon(1e-10));
      }
    CHECK_THROWS_AS(transverse_overlap_onaxis(1.0, 1.0, 1), DomainError);
  }

  TEST_CASE("off-axis overlap agrees with a polar double integral") {
    const double R = 1.0, sigma = 0.05;
    for (double r0 : {sigma, 3 * sigma, 0.4})
      for (int m : {0, 1, 2})
        for (int l : {1, 2}) {
          const double k = numerics::bessel_zero(m, l) / R;
          // (1 / 2 pi s^2) int int e^{-|y - y0|^2/2s^2} J_m(k r) cos(m phi) r dr dphi with y0 on the x axis
          auto inner = [&](long double r) {
            return oracle::composite_gl5(
                [&](long double phi) {
                  const long double d2 = r * r + r0 * r0 - 2 * r * r0 * std::cos(phi);
                  return std::exp(-d2 / (2 * sigma * sigma)) * std::cos(m * phi);
                },
                -oracle::pi_l, oracle::pi_l, 64);
          };
          const long double amp =
              oracle::composite_gl5([&](long double r) { return inner(r) * r * numerics::bessel_j(m, k * static_cast<double>(r)); },
                                    std::max(0.0, r0 - 10 * sigma), r0 + 10 * sigma, 80) /
              (2 * oracle::pi_l * sigma * sigma);
          CHECK(transverse_overlap_offaxis(sigma, R, r0, m, l) ==
                doctest::Approx(static_cast<double>(amp * amp)).epsilon(1e-9).scale(1e-20));
        }
    CHECK_THROWS_AS(transverse_overlap_offaxis(0.1, 1.0, 0.7, 1, 1), DomainError);
  }

  TEST_CASE("transverse coefficients match cubature") {
    oracle::Rng rng(13);
    const auto square = CrossSection::rectangle({1.0, 1.3});
    const auto neumann = CrossSection::rectangle({1.0, 1.3}, geometry::Boundary::neumann);
    for (int draw = 0; draw < 6; ++draw) {
      const double sigma = rng.uniform(0.03, 0.08);
      std::vector<double> y0 = {rng.uniform(8 * sigma, 1 - 8 * sigma), rng.uniform(8 * sigma, 1.3 - 8 * sigma)};
      for (const auto& cs : {square, neumann}) {
        const auto sm = Smearing::gaussian(sigma, {y0, 0.5});
        for (const auto& mode : geometry::enumerate_first(cs, 8).modes)
          CHECK(transverse_coefficient(cs, sm, mode) ==
                doctest::Approx(coefficient_oracle(cs, mode, y0, sigma)).epsilon(1e-8).scale(1e-8));
      }
    }
    const auto disk = CrossSection::disk(1.0);
    for (double r0 : {0.0, 0.05, 0.3}) {
      const double phi0 = rng.uniform(-pi, pi);
      std::vector<double> y0 = {r0 * std::cos(phi0), r0 * std::sin(phi0)};
      const auto sm = Smearing::gaussian(0.05, {y0, 0.5});
      for (const auto& mode : geometry::enumerate_first(disk, 10).modes)
        CHECK(transverse_coefficient(disk, sm, mode) ==
              doctest::Approx(coefficient_oracle(disk, mode, y0, 0.05)).epsilon(1e-8).scale(1e-8));
    }
  }

  TEST_CASE("on-axis detectors decouple from m != 0") {
    const auto disk = CrossSection::disk(1.0);
    const auto on_axis = Smearing::gaussian(0.05, Position::polar(0.0, 0.0, 0.5));
    CHECK(max_coupled_angular_order(disk, on_axis) == 0);
    for (const auto& mode : geometry::enumerate_first(disk, 40).modes)
      if (mode.multi_index[0] != 0) CHECK(transverse_coefficient(disk, on_axis, mode) == 0.0);
    const auto off_axis = Smearing::gaussian(0.05, Position::polar(0.05, 0.0, 0.5));
    CHECK(max_coupled_angular_order(disk, off_axis) == -1);
    CHECK(std::abs(transverse_coefficient(disk, off_axis, geometry::disk_eigenpair(1.0, 1, 1, geometry::Parity::cos))) > 1e-3);
    CHECK(transverse_coefficient(disk, off_axis, geometry::disk_eigenpair(1.0, 1, 1, geometry::Parity::sin)) == 0.0);
  }

  TEST_CASE("axial coefficients") {
    const double L = 3.0;
    oracle::Rng rng(17);
    for (int draw = 0; draw < 10; ++draw) {
      const double sigma = rng.uniform(0.02, 0.1);
      const double z0 = rng.uniform(8 * sigma, L - 8 * sigma);
      const auto sm = Smearing::gaussian(sigma, {{0.5, 0.5}, z0});
      for (int n : {1, 2, 7, 30}) {
        const double ref = numerics::integrate_1d(
            [&](double z) {
              return std::exp(-0.5 * std::pow((z - z0) / sigma, 2)) / (std::sqrt(2 * pi) * sigma) * std::sqrt(2 / L) *
                     std::sin(n * pi * z / L);
            },
            z0 - 12 * sigma, z0 + 12 * sigma);
        CHECK(axial_coefficient(L, sm, n) == doctest::Approx(ref).epsilon(1e-9).scale(1e-9));
        CHECK(axial_overlap(z0, L, sigma, n) * 2 / L == doctest::Approx(ref * ref).epsilon(1e-8).scale(1e-12));
      }
    }
    // Even axial modes vanish exactly at the midpoint.
    CHECK(axial_coefficient(L, Smearing::pointlike({{0.5, 0.5}, L / 2}), 4) == 0.0);
  }

  TEST_CASE("pointlike coefficients are mode values") {
    const auto cs = CrossSection::rectangle({1.0, 2.0});
    const auto sm = Smearing::pointlike({{0.3, 0.7}, 0.5});
    for (const auto& mode : geometry::enumerate_first(cs, 5).modes)
      CHECK(transverse_coefficient(cs, sm, mode) == doctest::Approx(geometry::evaluate(cs, mode, sm.center.y)));
    CHECK_THROWS_AS(sm.function(cs), DomainError);
  }

  TEST_CASE("detector validation") {
    subfields::CavityField f{CrossSection::rectangle({1.0, 1.0}), 1.0, 0.0, {}};
    DetectorModel d;
    d.smearing = Smearing::gaussian(0.01, {{0.5, 0.5}, 0.5});
    CHECK(d.validate(f).empty());
    d.smearing = Smearing::gaussian(0.3, {{0.5, 0.5}, 0.5});
    CHECK(d.validate(f).size() == 3);
    d.smearing = Smearing::gaussian(0.01, {{1.5, 0.5}, 0.5});
    CHECK_THROWS_AS(d.validate(f), DomainError);
    d.smearing = Smearing::gaussian(0.01, {{0.5, 0.5}, 1.5});
    CHECK_THROWS_AS(d.validate(f), DomainError);
    d.smearing = Smearing::gaussian(0.01, {{0.5, 0.5}, 0.5});
    d.gap = -1;
    CHECK_THROWS_AS(d.validate(f), DomainError);
    CHECK(d.sign() == Sign::plus);
    d.initial_state = InitialState::excited;
    CHECK(d.sign() == Sign::minus);
    CHECK_THROWS_AS(Switching::sudden(0.0), DomainError);
  }
}
