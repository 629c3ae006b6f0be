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

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <shared_mutex>
#include <vector>

#include "cavred/errors.hpp"

/// Special functions, quadrature and small arithmetic helpers shared by the
/// geometry, detector and response layers.
namespace cavred::numerics {

  inline constexpr double pi = 3.141592653589793238462643383279502884;

  // ---------------------------------------------------------------------------
  // Quadrature

  struct QuadratureSpec {
    double relative_tolerance = 1e-10;
    double absolute_tolerance = 1e-14;
    int max_subdivisions = 2000;

    /// Throws DomainError unless both tolerances are positive and
    /// max_subdivisions >= 1.
    void validate() const;
  };

  struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
    bool converged = false;
  };

  /// Globally adaptive Gauss-Kronrod (10/21) integration of f over [a, b].
  ///
  /// Either bound may be infinite. A half-line [a, inf) is mapped onto [0, 1)
  /// with x = a + t/(1 - t); the whole line is split at zero. The result
  /// satisfies |error| <= max(absolute_tolerance, relative_tolerance * |value|)
  /// when `converged` is set. Never throws on non-convergence.
  QuadratureResult integrate_1d_detailed(const std::function<double(double)>& f, double a, double b,
                                         const QuadratureSpec& spec = {});

  /// As integrate_1d_detailed, but throws ConvergenceError (carrying the best
  /// estimate and its error bound) when the tolerance is not reached within
  /// spec.max_subdivisions intervals.
  double integrate_1d(const std::function<double(double)>& f, double a, double b,
                      const QuadratureSpec& spec = {});

  /// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1], for
  /// the fixed-order tensor cubatures. Supported orders: 8, 16, 20, 30.
  struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
  };
  const GaussRule& gauss_legendre(int order);

  // ---------------------------------------------------------------------------
  // Bessel functions (integer order, real non-negative argument)

  /// J_m(x), first kind.
  double bessel_j(int m, double x);

  /// I_m(x), modified first kind. Throws OverflowError when the value exceeds
  /// the double range (x beyond roughly 713); use bessel_i_scaled there.
  double bessel_i(int m, double x);

  /// e^{-x} I_m(x). Finite for every x >= 0.
  double bessel_i_scaled(int m, double x);

  /// Cache of positive zeros x_{m,l} of J_m.
  ///
  /// Zeros are bracketed through interlacing with order m - 1 (order 0 uses
  /// the bracket ((l - 1/4) pi, (l - 1/8) pi)), so none is skipped. Lookups
  /// take a shared lock; insertion is serialized.
  class BesselZeroTable {
  public:
    double zero(int m, int l);

    /// Number of cached entries, summed over orders.
    std::size_t size() const;

  private:
    double compute(int m, int l);

    mutable std::shared_mutex mutex_;
    std::vector<std::vector<double>> zeros_;
  };

  BesselZeroTable& bessel_zero_table();

  /// l-th positive zero of J_m (l >= 1), served from the process-wide table.
  double bessel_zero(int m, int l);

  // ---------------------------------------------------------------------------
  // Helpers

  /// sin(pi x) and cos(pi x) with exact zeros at integer (resp. half-integer)
  /// arguments, so symmetry-forbidden couplings come out as exact zeros.
  double sin_pi(double x);
  double cos_pi(double x);

  /// log(exp(a) + exp(b)) without overflow; either argument may be -inf.
  double log_add(double a, double b);

  /// Streaming sum of non-negative terms given by their logarithms.
  /// Keeps a running maximum so terms like e^{-10^6} still add up correctly.
  class LogSum {
  public:
    void add(double log_term);
    void add(const LogSum& other);

    /// log of the accumulated sum; -inf when empty or all terms were zero.
    double log() const;
    double value() const { return std::exp(log()); }
    bool empty() const { return !(max_ > -std::numeric_limits<double>::infinity()); }

  private:
    double max_ = -std::numeric_limits<double>::infinity();
    double scaled_ = 0.0;
  };

  // ---------------------------------------------------------------------------
  // Parallelism

  /// Upper bound on worker threads used by parallel_for (default 1).
  void set_thread_limit(int threads);
  int thread_limit();

  /// Runs body(i) for i in [0, count). Each index is processed by exactly one
  /// worker; callers write into per-index slots, so results never depend on
  /// the thread count.
  void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace cavred::numerics
