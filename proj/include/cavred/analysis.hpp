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
#include <iosfwd>
#include <string>
#include <vector>

#include "cavred/response.hpp"

namespace cavred::analysis {

  using detector::Sign;
  using response::Ordering;

  /// |P - P_tr| / P.
  double delta_p(const response::TransitionResult& reference, const response::TransitionResult& truncated, Sign sign);

  struct ConvergencePoint {
    std::size_t n_sub = 0;
    double delta = 0.0;
    /// log10 of delta, finite even when delta underflows a double.
    double log10_delta = 0.0;
  };

  struct ConvergenceCurve {
    Ordering ordering = Ordering::ascending_mass;
    Sign sign = Sign::plus;
    std::vector<ConvergencePoint> points;

    /// Smallest N with delta < threshold, or 0 if none.
    std::size_t first_below(double threshold) const;
  };

  /// delta(N) for N = 1..max_subfields from a single converged reference, as the
  /// ratio of the omitted tail to the total (no subtraction, so tiny values
  /// stay accurate).
  ConvergenceCurve convergence_curve(const response::TransitionResult& reference, Sign sign, std::size_t max_subfields,
                                     Ordering ordering = Ordering::ascending_mass);

  /// Runs the reference mode sum (tail below 1e-4 of the total or the
  /// controls' own tolerance, whichever is tighter) and returns its curve.
  /// Throws ConvergenceError when the reference does not converge.
  ConvergenceCurve convergence_scan(const response::Scenario& scenario, std::size_t max_subfields, Ordering ordering,
                                    Sign sign, response::ModeSumControls controls = {});

  struct L2Curve {
    std::vector<double> delta; ///< delta_L2 after keeping the first N coupled subfields, N = 1..
    std::vector<geometry::TransverseMode> modes;
    double norm_squared = 0.0; ///< transverse ||F||^2 used as denominator
    bool from_parseval = false;
  };

  /// Squared L2 truncation error of the smearing versus the number of kept
  /// coupled subfields in ascending mass order. Depends on the geometry and the
  /// smearing only.
  L2Curve l2_truncation_curve(const geometry::CrossSection& cs, const detector::Smearing& smearing,
                              std::size_t max_subfields, double tail_tolerance = 1e-8);

  enum class SweepVariable { omega_T, n_sub, beta, sigma_over_R };
  enum class SweepOutput { delta_p_plus, delta_p_minus, delta_l2 };

  std::string to_string(SweepVariable v);
  std::string to_string(SweepOutput o);

  struct SweepSpec {
    SweepVariable variable = SweepVariable::omega_T;
    std::vector<double> grid;
    response::Scenario fixed;
    std::vector<std::size_t> n_sub = {1};
    Ordering ordering = Ordering::ascending_mass;
    response::ModeSumControls controls;

    void validate() const;
  };

  struct SweepRow {
    double x = 0.0;
    std::size_t n_sub = 0;
    SweepOutput output = SweepOutput::delta_p_plus;
    double value = 0.0;
    double log10_value = 0.0;
  };

  struct SweepTable {
    SweepVariable variable = SweepVariable::omega_T;
    std::vector<SweepRow> rows;
  };

  /// Evaluates every grid point (in parallel) and returns rows in grid order,
  /// then n_sub order, then output order.
  SweepTable sweep(const SweepSpec& spec, const std::vector<SweepOutput>& outputs);

  /// Scenario with the sweep variable set to x.
  response::Scenario apply_sweep_value(const response::Scenario& base, SweepVariable variable, double x);

  void write_sweep_csv(std::ostream& out, const SweepTable& table);

  struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> log10_y;
  };

  /// Static SVG line plot with a log10 y axis clipped at 1e-16.
  void write_svg_plot(std::ostream& out, const std::string& title, const std::string& x_label,
                      const std::vector<PlotSeries>& series, bool log_x);

  /// Series for each (n_sub, output) pair of a sweep table.
  std::vector<PlotSeries> sweep_series(const SweepTable& table);

} // namespace cavred::analysis
