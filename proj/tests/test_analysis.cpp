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
#include <sstream>

#include "cavred/analysis.hpp"
#include "oracles.hpp"

using namespace cavred;
using namespace cavred::analysis;
using detector::Position;
using detector::Smearing;
using detector::Switching;
using geometry::CrossSection;
using numerics::pi;

namespace {

  response::Scenario square_scenario() {
    response::Scenario s;
    s.field = {CrossSection::rectangle({1.0, 1.0}), 3.0, 0.0, {}};
    s.detector.gap = 12.0;
    s.detector.smearing = Smearing::gaussian(0.05, {{0.37, 0.52}, 1.5});
    s.detector.switching = Switching::gaussian(0.6);
    s.detector.initial_state = detector::InitialState::excited;
    return s;
  }

} // namespace

TEST_SUITE("analysis") {

  TEST_CASE("convergence curve equals explicit truncated sums") {
    const auto s = square_scenario();
    response::ModeSumControls c;
    c.tail_tolerance = 1e-10;
    const auto ref = response::transition_probability(s, c);
    REQUIRE(ref.converged);
    const auto curve = convergence_curve(ref, Sign::minus, 8);
    REQUIRE(curve.points.size() == 8);
    for (std::size_t n : {1, 2, 5, 8}) {
      response::ModeSumControls t;
      t.subfield_set = subfields::TruncationSet::first(n);
      const auto tr = response::transition_probability(s, t);
      CHECK(curve.points[n - 1].delta == doctest::Approx(delta_p(ref, tr, Sign::minus)).epsilon(1e-9));
      CHECK(curve.points[n - 1].log10_delta == doctest::Approx(std::log10(curve.points[n - 1].delta)));
    }
    for (std::size_t i = 1; i < curve.points.size(); ++i) CHECK(curve.points[i].delta <= curve.points[i - 1].delta);
    CHECK_THROWS_AS(convergence_curve(ref, Sign::minus, 8, Ordering::resonant_first), DomainError);
  }

  TEST_CASE("first_below") {
    ConvergenceCurve c;
    for (double d : {0.5, 0.2, 0.05, 0.001}) c.points.push_back({c.points.size() + 1, d, std::log10(d)});
    CHECK(c.first_below(0.1) == 3);
    CHECK(c.first_below(0.01) == 4);
    CHECK(c.first_below(1e-5) == 0);
  }

  TEST_CASE("convergence scan reports a failed reference") {
    auto s = square_scenario();
    response::ModeSumControls starved;
    starved.max_subfields = 3;
    CHECK_THROWS_AS(convergence_scan(s, 3, Ordering::ascending_mass, Sign::minus, starved), ConvergenceError);
  }

  TEST_CASE("L2 truncation curve against cubature coefficients") {
    const auto cs = CrossSection::rectangle({1.0, 1.0});
    const double sigma = 0.05;
    const std::vector<double> y0 = {0.37, 0.52};
    const auto curve = l2_truncation_curve(cs, Smearing::gaussian(sigma, {y0, 0.5}), 12);
    REQUIRE(curve.delta.size() == 12);
    const auto modes = geometry::enumerate_first(cs, 12).modes;
    double kept = 0;
    for (std::size_t j = 0; j < 12; ++j) {
      geometry::CubatureSpec spec;
      spec.initial_panels = 8;
      spec.max_panels = 256;
      const double c = geometry::integrate_over(
                           cs,
                           [&](std::span<const double> y) {
                             const double r2 = std::pow(y[0] - y0[0], 2) + std::pow(y[1] - y0[1], 2);
                             return std::exp(-0.5 * r2 / (sigma * sigma)) / (2 * pi * sigma * sigma) *
                                    geometry::evaluate(cs, modes[j], y);
                           },
                           spec)
                           .value;
      kept += c * c;
      // Whole-plane transverse norm of the Gaussian: 1 / (4 pi sigma^2).
      CHECK(curve.delta[j] == doctest::Approx(1 - kept * 4 * pi * sigma * sigma).epsilon(1e-7));
    }
    for (std::size_t j = 1; j < curve.delta.size(); ++j) CHECK(curve.delta[j] <= curve.delta[j - 1]);
  }

  TEST_CASE("L2 curve of special smearings") {
    const auto cs = CrossSection::rectangle({1.0, 1.0});
    const auto mode = geometry::enumerate_first(cs, 2).modes[1];
    const auto single = l2_truncation_curve(cs, Smearing::transverse_mode(mode, 0.1, 0.5), 5);
    REQUIRE(single.delta.size() == 1);
    CHECK(single.delta[0] == 0.0);
    CHECK(single.modes[0].multi_index == mode.multi_index);

    const auto disk = CrossSection::disk(1.0);
    const auto axis = l2_truncation_curve(disk, Smearing::gaussian(0.05, Position::polar(0.0, 0.0, 0.5)), 10);
    for (const auto& m : axis.modes) CHECK(m.multi_index[0] == 0);
    CHECK_THROWS_AS(l2_truncation_curve(cs, Smearing::pointlike({{0.5, 0.5}, 0.5}), 3), DomainError);
  }

  TEST_CASE("sweeps are ordered and thread-count independent") {
    SweepSpec spec;
    spec.fixed = square_scenario();
    spec.grid = {1.0, 3.0, 9.0};
    spec.n_sub = {1, 3};
    std::vector<SweepOutput> outs = {SweepOutput::delta_p_plus, SweepOutput::delta_p_minus, SweepOutput::delta_l2};
    numerics::set_thread_limit(1);
    const auto a = sweep(spec, outs);
    numerics::set_thread_limit(3);
    const auto b = sweep(spec, outs);
    numerics::set_thread_limit(1);
    REQUIRE(a.rows.size() == 3 * 2 * 3);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      CHECK(a.rows[i].x == spec.grid[i / 6]);
      CHECK(a.rows[i].n_sub == spec.n_sub[(i / 3) % 2]);
      CHECK(a.rows[i].output == outs[i % 3]);
      CHECK(a.rows[i].value == b.rows[i].value);
    }
    std::ostringstream csv, svg;
    write_sweep_csv(csv, a);
    CHECK(csv.str().rfind("variable,x,n_sub,quantity,value,log10_value\n", 0) == 0);
    write_svg_plot(svg, "t", "Omega T", sweep_series(a), true);
    CHECK(svg.str().find("<svg") != std::string::npos);
    CHECK(sweep_series(a).size() == 6);
  }

  TEST_CASE("sweep variables") {
    const auto s = square_scenario();
    CHECK(apply_sweep_value(s, SweepVariable::omega_T, 24.0).detector.switching.T == doctest::Approx(2.0));
    CHECK(apply_sweep_value(s, SweepVariable::beta, 0.3).state.beta == 0.3);
    CHECK(apply_sweep_value(s, SweepVariable::sigma_over_R, 0.02).detector.smearing.sigma == doctest::Approx(0.02));
    CHECK_THROWS_AS(apply_sweep_value(s, SweepVariable::omega_T, -1.0), DomainError);
    SweepSpec bad;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    CHECK(to_string(SweepVariable::omega_T) == "omega_T");
    CHECK(to_string(SweepOutput::delta_l2) == "delta_l2");
  }
}
