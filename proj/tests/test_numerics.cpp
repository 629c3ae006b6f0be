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

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "cavred/numerics.hpp"
#include "oracles.hpp"

using namespace cavred;
using namespace cavred::numerics;

TEST_SUITE("numerics") {

  TEST_CASE("bessel_j matches the long double series") {
    for (int m : {0, 1, 2, 5})
      for (double x : {0.1, 1.0, 2.5, 4.0, 7.3, 10.0}) {
        const double ref = static_cast<double>(oracle::bessel_j_series(m, x));
        CHECK(bessel_j(m, x) == doctest::Approx(ref).epsilon(1e-12));
      }
  }

  TEST_CASE("bessel_i matches the long double series") {
    for (int m : {0, 1, 3, 7})
      for (double x : {0.0, 0.3, 1.0, 5.0, 20.0, 45.0}) {
        const long double ref = oracle::bessel_i_series(m, x);
        CHECK(bessel_i(m, x) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
        CHECK(bessel_i_scaled(m, x) == doctest::Approx(static_cast<double>(ref * std::exp(-static_cast<long double>(x))))
                                           .epsilon(1e-12));
      }
    CHECK(bessel_i(0, 1.0) == doctest::Approx(1.2660658777520082).epsilon(1e-15));
  }

  TEST_CASE("bessel_i_scaled is finite far beyond the overflow point") {
    CHECK_THROWS_AS(bessel_i(0, 800.0), OverflowError);
    // Asymptotically e^{-x} I_0(x) ~ 1/sqrt(2 pi x) (1 + 1/(8x)).
    const double x = 5000.0;
    CHECK(bessel_i_scaled(0, x) == doctest::Approx(1.0 / std::sqrt(2 * pi * x) * (1 + 1 / (8 * x) + 9 / (128 * x * x)))
                                       .epsilon(1e-10));
    // Uniform recurrence I_{m-1} - I_{m+1} = (2m/x) I_m, scaled.
    for (double y : {50.0, 300.0, 2000.0})
      for (int m : {1, 4, 12}) {
        const double lhs = bessel_i_scaled(m - 1, y) - bessel_i_scaled(m + 1, y);
        CHECK(lhs == doctest::Approx(2.0 * m / y * bessel_i_scaled(m, y)).epsilon(1e-9));
      }
  }

  TEST_CASE("bessel zeros agree with bisection of the series") {
    for (int m : {0, 1, 2, 3}) {
      const auto ref = oracle::bessel_zeros_scan(m, 3, 14);
      REQUIRE(ref.size() == 3);
      for (int l = 1; l <= 3; ++l) CHECK(std::abs(bessel_zero(m, l) - static_cast<double>(ref[l - 1])) < 1e-12);
    }
    CHECK(bessel_zero(0, 1) == doctest::Approx(2.4048255576957728).epsilon(1e-15));
  }

  TEST_CASE("bessel zeros interlace and are roots") {
    for (int m = 0; m <= 10; ++m)
      for (int l = 1; l <= 10; ++l) {
        const double x = bessel_zero(m, l);
        CHECK(std::abs(bessel_j(m, x)) < 1e-13);
        CHECK(x < bessel_zero(m + 1, l));
        CHECK(bessel_zero(m + 1, l) < bessel_zero(m, l + 1));
      }
  }

  TEST_CASE("adaptive quadrature on known integrals") {
    CHECK(integrate_1d([](double x) { return std::exp(-x * x); }, -INFINITY, INFINITY) ==
          doctest::Approx(std::sqrt(pi)).epsilon(1e-12));
    CHECK(integrate_1d([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, INFINITY) ==
          doctest::Approx(pi / 2).epsilon(1e-12));
    CHECK(integrate_1d([](double x) { return std::sin(50 * x) * std::sin(50 * x); }, 0.0, pi) ==
          doctest::Approx(pi / 2).epsilon(1e-12));
    // Hankel transform of a Gaussian: int_0^inf r e^{-r^2/2} J_0(r) dr = e^{-1/2}.
    CHECK(integrate_1d([](double r) { return r * std::exp(-r * r / 2) * bessel_j(0, r); }, 0.0, INFINITY) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-11));
  }

  TEST_CASE("non-convergence is reported, not hidden") {
    QuadratureSpec tight;
    tight.max_subdivisions = 3;
    tight.relative_tolerance = 1e-14;
    auto f = [](double x) { return std::sin(1000 * x) * std::exp(-x); };
    const auto r = integrate_1d_detailed(f, 0.0, 10.0, tight);
    CHECK_FALSE(r.converged);
    CHECK_THROWS_AS(integrate_1d(f, 0.0, 10.0, tight), ConvergenceError);
    QuadratureSpec bad;
    bad.relative_tolerance = -1;
    CHECK_THROWS_AS(bad.validate(), DomainError);
  }

  TEST_CASE("gauss legendre rules integrate polynomials exactly") {
    for (int order : {8, 16, 20, 30}) {
      const auto& rule = gauss_legendre(order);
      double s = 0, s2 = 0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        s += rule.weights[i];
        s2 += rule.weights[i] * std::pow(rule.nodes[i], 2 * order - 2);
      }
      CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
      CHECK(s2 == doctest::Approx(2.0 / (2 * order - 1)).epsilon(1e-12));
    }
    CHECK_THROWS(gauss_legendre(7));
  }

  TEST_CASE("sin_pi and cos_pi give exact zeros") {
    for (int k = -6; k <= 6; ++k) {
      CHECK(sin_pi(k) == 0.0);
      CHECK(cos_pi(k + 0.5) == 0.0);
      CHECK(std::abs(cos_pi(k)) == 1.0);
    }
    oracle::Rng rng(11);
    for (int i = 0; i < 200; ++i) {
      const double x = rng.uniform(-50, 50);
      CHECK(sin_pi(x) == doctest::Approx(static_cast<double>(std::sin(oracle::pi_l * x))).epsilon(1e-12).scale(1));
      CHECK(cos_pi(x) == doctest::Approx(static_cast<double>(std::cos(oracle::pi_l * x))).epsilon(1e-12).scale(1));
    }
  }

  TEST_CASE("log-domain sums") {
    CHECK(log_add(-INFINITY, 2.0) == 2.0);
    CHECK(log_add(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)));
    LogSum s;
    CHECK(s.empty());
    CHECK(s.log() == -INFINITY);
    s.add(-1e6);
    s.add(-1e6 + std::log(3.0));
    CHECK(s.log() == doctest::Approx(-1e6 + std::log(4.0)).epsilon(1e-15));
    LogSum t;
    t.add(std::log(10.0));
    t.add(s);
    CHECK(t.value() == doctest::Approx(10.0));
  }

  TEST_CASE("parallel_for visits each index once and rethrows") {
    set_thread_limit(4);
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(50, [](std::size_t i) { if (i == 17) throw std::runtime_error("x"); }),
                    std::runtime_error);
    CHECK_THROWS_AS(set_thread_limit(0), DomainError);
    set_thread_limit(1);
  }
}
