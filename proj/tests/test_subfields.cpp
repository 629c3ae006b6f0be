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
#include "cavred/subfields.hpp"
#include "oracles.hpp"

using namespace cavred;
using namespace cavred::subfields;
using geometry::CrossSection;
using numerics::pi;

namespace {

  std::vector<Subfield> project_all(const CrossSection& cs, const SmearingFunction& F, std::size_t count,
                                    const std::vector<double>& z_grid) {
    std::vector<Subfield> out;
    for (const auto& mode : geometry::enumerate_first(cs, count).modes) {
      if (out.size() == count) break;
      auto profile = project_smearing(cs, F, mode, z_grid);
      Subfield s;
      s.mode = mode;
      s.smearing_norm_squared = profile.norm_squared();
      s.smearing = [profile](double z) { return profile(z); };
      out.push_back(std::move(s));
    }
    return out;
  }

  std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
    return g;
  }

} // namespace

TEST_SUITE("subfields") {

  TEST_CASE("effective masses") {
    CavityField f{CrossSection::rectangle({1.0, 1.0}), 10.0, 0.0, {}};
    CHECK(effective_mass(f, 2 * pi * pi) == doctest::Approx(std::sqrt(2.0) * pi));
    f.mass = 3.0;
    f.units = {2.0, 5.0};
    // (hbar/c) sqrt(M^2 c^2/hbar^2 + lambda)
    CHECK(effective_mass(f, 4.0) == doctest::Approx(0.4 * std::sqrt(9.0 * 25.0 / 4.0 + 4.0)));
    CHECK(effective_mass(f, 0.0) == doctest::Approx(3.0));
  }

  TEST_CASE("sampled profiles interpolate smooth data") {
    const auto grid = linspace(0.0, 2.0, 161);
    std::vector<double> v;
    for (double z : grid) v.push_back(std::exp(-std::pow(z - 1.0, 2) / 0.08));
    SampledProfile p(0.0, grid[1] - grid[0], v);
    oracle::Rng rng(3);
    for (int i = 0; i < 50; ++i) {
      const double z = rng.uniform(0.0, 2.0);
      CHECK(p(z) == doctest::Approx(std::exp(-std::pow(z - 1.0, 2) / 0.08)).epsilon(1e-5).scale(1));
    }
    CHECK(p(-0.1) == 0.0);
    CHECK(p(2.1) == 0.0);
    CHECK(p.norm_squared() == doctest::Approx(std::sqrt(pi * 0.04)).epsilon(1e-8));
  }

  TEST_CASE("uniform z grid is clipped to the cavity") {
    const auto g = uniform_z_grid(0.5, 0.1, 1.0);
    CHECK(g.front() == doctest::Approx(0.0));
    CHECK(g.back() == doctest::Approx(1.0));
    CHECK(g[1] - g[0] <= 0.1 / 8 + 1e-15);
  }

  TEST_CASE("projected on-axis disk Gaussian matches the closed form") {
    const double R = 1.0, sigma = 0.05, L = 2.0, z0 = 1.0;
    const auto cs = CrossSection::disk(R);
    const auto F = detector::Smearing::gaussian(sigma, detector::Position::polar(0.0, 0.0, z0)).function(cs);
    const auto zs = linspace(z0 - 4 * sigma, z0 + 4 * sigma, 9);
    for (int l : {1, 2, 5}) {
      const auto mode = geometry::disk_eigenpair(R, 0, l, geometry::Parity::none);
      const auto profile = project_smearing(cs, F, mode, zs);
      for (double z : zs)
        CHECK(profile(z) == doctest::Approx(gaussian_disk_profile(R, sigma, z0, l, z)).epsilon(1e-8));
    }
    // m != 0 modes do not couple to an axisymmetric profile.
    const auto m1 = geometry::disk_eigenpair(R, 1, 1, geometry::Parity::cos);
    const auto p1 = project_smearing(cs, F, m1, zs);
    for (double v : p1.values()) CHECK(std::abs(v) < 1e-12);
  }

  TEST_CASE("truncation sets") {
    TruncationSet J({4, 2, 2, 7});
    CHECK(J.indices() == std::vector<std::size_t>{2, 4, 7});
    CHECK(J.contains(4));
    CHECK_FALSE(J.contains(3));
    CHECK(TruncationSet::first(3).indices() == std::vector<std::size_t>{1, 2, 3});
    CHECK_THROWS_AS(TruncationSet({}), DomainError);
    CHECK_THROWS_AS(TruncationSet({0, 1}), DomainError);
  }

  TEST_CASE("a mode-shaped smearing lives in a single subfield") {
    const auto cs = CrossSection::rectangle({1.0, 1.0});
    const auto mode = geometry::enumerate_first(cs, 3).modes[1];
    const auto F = detector::Smearing::transverse_mode(mode, 0.1, 0.5).function(cs);
    const auto grid = uniform_z_grid(0.5, 0.1, 1.0);
    const auto subs = project_all(cs, F, 6, grid);
    for (const auto& s : subs)
      CHECK(s.smearing_norm_squared ==
            doctest::Approx(s.mode.sorted_index == 2 ? 1.0 / (2 * std::sqrt(pi) * 0.1) : 0.0).epsilon(1e-6).scale(1));
    const auto tr = truncate_smearing(cs, F, subs, TruncationSet({2}));
    const double y[2] = {0.3, 0.61};
    // Between grid nodes only the interpolation error of the sampled profile remains.
    CHECK(std::abs(tr.residual(y, 0.47)) < 1e-6 * std::abs(tr.full(y, 0.47)));
    CHECK(std::abs(tr.residual(y, 0.5)) < 1e-12 * std::abs(tr.full(y, 0.5)));
    CHECK_THROWS_AS(truncate_smearing(cs, F, subs, TruncationSet({9})), DomainError);
  }

  TEST_CASE("Parseval and direct L2 errors agree") {
    const auto cs = CrossSection::rectangle({1.0, 1.0});
    const double sigma = 0.1;
    oracle::Rng rng(21);
    for (int trial = 0; trial < 2; ++trial) {
      detector::Position pos{{rng.uniform(0.45, 0.55), rng.uniform(0.45, 0.55)}, 0.5};
      const auto F = detector::Smearing::gaussian(sigma, pos).function(cs);
      const auto grid = linspace(0.5 - 8 * sigma, 0.5 + 8 * sigma, 65);
      const auto subs = project_all(cs, F, 8, grid);
      const double total = std::pow(4 * pi * sigma * sigma, -1.5);
      for (std::size_t k : {1, 3, 8}) {
        std::vector<double> kept;
        for (std::size_t j = 0; j < k; ++j) kept.push_back(subs[j].smearing_norm_squared);
        const double parseval = l2_relative_error(total, kept);
        geometry::CubatureSpec spec;
        spec.relative_tolerance = 1e-8;
        const double direct = l2_relative_error(truncate_smearing(cs, F, subs, TruncationSet::first(k)), grid, spec);
        CHECK(direct == doctest::Approx(parseval).epsilon(1e-5));
      }
    }
  }

  TEST_CASE("Parseval total falls back when the tail has not settled") {
    std::vector<double> decaying, flat(20, 1.0);
    for (int i = 0; i < 30; ++i) decaying.push_back(std::pow(0.1, i));
    bool called = false;
    auto direct = [&] {
      called = true;
      return 42.0;
    };
    const auto a = parseval_total(decaying, direct);
    CHECK(a.from_parseval);
    CHECK(a.value == doctest::Approx(1.0 / 0.9));
    CHECK_FALSE(called);
    const auto b = parseval_total(flat, direct);
    CHECK_FALSE(b.from_parseval);
    CHECK(b.value == 42.0);
    const double kept[] = {2.0};
    CHECK(l2_relative_error(1.0, kept) == 0.0);
  }
}
