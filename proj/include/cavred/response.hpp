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
#include <optional>
#include <span>
#include <vector>

#include "cavred/detector.hpp"
#include "cavred/geometry.hpp"
#include "cavred/subfields.hpp"

/// Leading-order transition probabilities from mode sums. Every probability is
/// reported divided by g^2 / hbar^2.
namespace cavred::response {

  using detector::Sign;

  struct FieldState {
    enum class Kind { vacuum, thermal };
    Kind kind = Kind::vacuum;
    double beta = std::numeric_limits<double>::infinity(); ///< inverse temperature (1 / energy)

    static FieldState vacuum() { return {}; }
    static FieldState thermal(double beta);
    bool is_vacuum() const { return kind == Kind::vacuum; }
  };

  struct Scenario {
    subfields::CavityField field;
    FieldState state;
    detector::DetectorModel detector;

    /// Validates every part; returns the detector's soft warnings.
    std::vector<std::string> validate() const;
  };

  enum class Ordering { ascending_mass, resonant_first };

  struct ModeSumControls {
    long n_max = 2'000'000;
    /// Positions (1-based, in the chosen ordering, coupled subfields only) to
    /// include. Empty means all.
    std::optional<subfields::TruncationSet> subfield_set;
    double tail_tolerance = 1e-8;
    std::size_t max_subfields = 4000;
    Ordering ordering = Ordering::ascending_mass;

    void validate() const;
  };

  struct SubfieldContribution {
    std::size_t position = 0; ///< 1-based, in the reported ordering
    geometry::TransverseMode mode;
    double effective_mass = 0.0;
    double transverse_weight = 0.0; ///< squared transverse overlap c_j^2
    double log_plus = -std::numeric_limits<double>::infinity();
    double log_minus = -std::numeric_limits<double>::infinity();
    long axial_terms = 0;
    bool converged = false;

    double plus() const { return std::exp(log_plus); }
    double minus() const { return std::exp(log_minus); }
    double log_value(Sign s) const { return s == Sign::plus ? log_plus : log_minus; }
  };

  struct TransitionResult {
    double P_plus = 0.0;
    double P_minus = 0.0;
    double log_P_plus = -std::numeric_limits<double>::infinity();
    double log_P_minus = -std::numeric_limits<double>::infinity();
    std::vector<SubfieldContribution> per_subfield;
    Ordering ordering = Ordering::ascending_mass;
    bool converged = false;
    /// Estimated omitted remainder relative to the reported sum (0 when the
    /// sum was restricted to an explicit subfield set).
    double tail_estimate = 0.0;

    double probability(Sign s) const { return s == Sign::plus ? P_plus : P_minus; }
    double log_probability(Sign s) const { return s == Sign::plus ? log_P_plus : log_P_minus; }
  };

  /// N_{ln} for the (0, l) subfield of a cylindrical cavity and axial mode n.
  double excitation_number(const Scenario& scenario, int l, int n, Sign sign);

  /// Mode-sum probabilities on a disk cross-section (vacuum or thermal).
  TransitionResult transition_probability_cylinder(const Scenario& scenario, const ModeSumControls& controls = {});

  /// Mode-sum probabilities in a rectangular Dirichlet cavity, vacuum or
  /// thermal. Thermal occupations enter as (n+1) S(+-) + n S(-+).
  TransitionResult transition_probability_thermal_box(const Scenario& scenario, const ModeSumControls& controls = {});

  /// Dispatches on the cross-section.
  TransitionResult transition_probability(const Scenario& scenario, const ModeSumControls& controls = {});

  /// ||F||_+-^2 = P_+- / g^2 for the scenario's own smearing.
  double kernel_norm(const Scenario& scenario, Sign sign, const ModeSumControls& controls = {});

  struct KernelNorms {
    double plus = 0.0;
    double minus = 0.0;
    double value(Sign s) const { return s == Sign::plus ? plus : minus; }
  };

  struct ProjectionGrid {
    int order = 20;           ///< Gauss-Legendre points per panel
    int transverse_panels = 16;
    int axial_panels = 32;
  };

  /// ||F||_+-^2 for an arbitrary smearing F on a finite mode space: the listed
  /// transverse modes times axial modes 1..n_max. Overlaps are obtained by
  /// fixed tensor Gauss-Legendre cubature over Gamma x [z_begin, z_end]; F must
  /// vanish outside that slab.
  KernelNorms kernel_norm(const Scenario& scenario, const subfields::SmearingFunction& F,
                          std::span<const geometry::TransverseMode> modes, int n_max, double z_begin, double z_end,
                          const ProjectionGrid& grid = {});

  /// log of the per-mode weight (c / 2 omega) W_+-(omega) multiplying |F_k|^2,
  /// where W is S(+-) in vacuum and (n+1) S(+-) + n S(-+) in a thermal state.
  double log_mode_weight(const Scenario& scenario, double omega, Sign sign);

} // namespace cavred::response
