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

#include "cavred/response.hpp"

#include <algorithm>
#include <string>

namespace cavred::response {

  using numerics::LogSum;
  using numerics::pi;

  namespace {
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    constexpr long axial_block = 50;
    constexpr std::size_t subfield_block = 10;
    // e^{-27.63} ~ 1e-12
    constexpr double axial_damping_limit = 27.63;
  } // namespace

  FieldState FieldState::thermal(double beta) {
    if (!(beta > 0.0)) throw DomainError("thermal state: beta must be positive");
    if (std::isinf(beta)) return vacuum();
    return {Kind::thermal, beta};
  }

  std::vector<std::string> Scenario::validate() const {
    field.validate();
    if (state.kind == FieldState::Kind::thermal && !(state.beta > 0.0))
      throw DomainError("thermal state: beta must be positive");
    return detector.validate(field);
  }

  void ModeSumControls::validate() const {
    if (n_max < 1) throw DomainError("mode sum: n_max must be >= 1");
    if (!(tail_tolerance > 0.0)) throw DomainError("mode sum: tail_tolerance must be positive");
    if (max_subfields < 1) throw DomainError("mode sum: max_subfields must be >= 1");
  }

  double log_mode_weight(const Scenario& s, double omega, Sign sign) {
    const auto& sw = s.detector.switching;
    const double gap = s.detector.gap;
    const double base = std::log(s.field.units.c / (2.0 * omega));
    const double log_s = detector::log_switching_factor(sw, gap, omega, sign);
    if (s.state.is_vacuum()) return base + log_s;
    const double x = s.state.beta * s.field.units.hbar * omega;
    const double log_n = -x - std::log(-std::expm1(-x));
    const double log_n1 = -std::log(-std::expm1(-x));
    const double log_other = detector::log_switching_factor(sw, gap, omega, detector::opposite(sign));
    return base + numerics::log_add(log_n1 + log_s, log_n + log_other);
  }

  double excitation_number(const Scenario& s, int l, int n, Sign sign) {
    const auto& cs = s.field.cross_section;
    if (!cs.is_disk()) throw DomainError("excitation_number: requires a disk cross-section");
    if (l < 1 || n < 1) throw DomainError("excitation_number: l and n must be >= 1");
    const auto mode = geometry::disk_eigenpair(cs.radius(), 0, l, geometry::Parity::none);
    const double c_tr = detector::transverse_coefficient(cs, s.detector.smearing, mode);
    const double a = detector::axial_coefficient(s.field.length, s.detector.smearing, n);
    if (c_tr == 0.0 || a == 0.0) return 0.0;
    const double mu = subfields::effective_mass(s.field, mode.eigenvalue) * s.field.units.c / s.field.units.hbar;
    const double k = n * pi / s.field.length;
    const double omega = s.field.units.c * std::hypot(mu, k);
    FieldState vac = FieldState::vacuum();
    Scenario v{s.field, vac, s.detector};
    return std::exp(log_mode_weight(v, omega, sign) + 2.0 * std::log(std::abs(c_tr)) + 2.0 * std::log(std::abs(a)));
  }

  // ---------------------------------------------------------------------------
  // Mode-sum engine

  namespace {

    struct AxialSum {
      LogSum plus, minus;
      long terms = 0;
      bool converged = false;
    };

    bool block_small(const LogSum& block, const LogSum& running, long n, double tol) {
      if (block.empty()) return true;
      if (running.empty()) return false;
      const double scale = std::max(1.0, static_cast<double>(n) / axial_block);
      return block.log() + std::log(scale) < std::log(tol) + running.log();
    }

    AxialSum axial_sum(const Scenario& s, double mu, double log_weight, const ModeSumControls& controls) {
      AxialSum out;
      const double L = s.field.length;
      const double c = s.field.units.c;
      const double gap = s.detector.gap;
      const auto& sm = s.detector.smearing;
      const bool damped = sm.kind != detector::SmearingKind::pointlike;
      LogSum block_p, block_m;
      for (long n = 1; n <= controls.n_max; ++n) {
        const double a = detector::axial_coefficient(L, sm, static_cast<int>(n));
        const double omega = c * std::hypot(mu, n * pi / L);
        if (a != 0.0) {
          const double base = log_weight + 2.0 * std::log(std::abs(a));
          block_p.add(base + log_mode_weight(s, omega, Sign::plus));
          block_m.add(base + log_mode_weight(s, omega, Sign::minus));
        }
        out.terms = n;
        if (n % axial_block == 0 || n == controls.n_max) {
          out.plus.add(block_p);
          out.minus.add(block_m);
          if (omega > gap) {
            const bool small = block_small(block_p, out.plus, n, controls.tail_tolerance) &&
                               block_small(block_m, out.minus, n, controls.tail_tolerance);
            const double q = n * pi * sm.sigma / L;
            if (small || (damped && q * q > axial_damping_limit)) {
              out.converged = true;
              break;
            }
          }
          block_p = LogSum();
          block_m = LogSum();
        }
      }
      return out;
    }

    struct Candidate {
      geometry::TransverseMode mode;
      double weight;
    };

    TransitionResult finish(std::vector<SubfieldContribution> contributions, const ModeSumControls& controls,
                            const Scenario& s, bool converged, double tail) {
      if (controls.ordering == Ordering::resonant_first && !contributions.empty()) {
        const double gap = s.detector.gap;
        const double c2h = s.field.units.c * s.field.units.c / s.field.units.hbar;
        auto detune = [&](const SubfieldContribution& x) { return std::abs(gap - x.effective_mass * c2h); };
        double best = detune(contributions.front());
        for (const auto& x : contributions) best = std::min(best, detune(x));
        const double slack = 1e-12 * std::max(best, gap);
        std::stable_partition(contributions.begin(), contributions.end(),
                              [&](const SubfieldContribution& x) { return detune(x) <= best + slack; });
      }
      for (std::size_t i = 0; i < contributions.size(); ++i) contributions[i].position = i + 1;

      TransitionResult r;
      LogSum plus, minus;
      bool all_axial = true;
      for (const auto& x : contributions) {
        if (controls.subfield_set && !controls.subfield_set->contains(x.position)) continue;
        plus.add(x.log_plus);
        minus.add(x.log_minus);
        all_axial = all_axial && x.converged;
      }
      if (controls.subfield_set) {
        r.per_subfield.reserve(controls.subfield_set->size());
        for (const auto& x : contributions)
          if (controls.subfield_set->contains(x.position)) r.per_subfield.push_back(x);
        tail = 0.0;
      } else {
        r.per_subfield = std::move(contributions);
      }
      r.log_P_plus = plus.log();
      r.log_P_minus = minus.log();
      r.P_plus = std::exp(r.log_P_plus);
      r.P_minus = std::exp(r.log_P_minus);
      r.ordering = controls.ordering;
      r.converged = converged && all_axial;
      r.tail_estimate = tail;
      return r;
    }

    TransitionResult mode_sum(const Scenario& s, const ModeSumControls& controls) {
      s.validate();
      controls.validate();
      const auto& cs = s.field.cross_section;
      geometry::EnumerationOptions eopts;
      eopts.max_angular_order = detector::max_coupled_angular_order(cs, s.detector.smearing);

      // Explicit sets in mass order only need enumeration up to their largest position.
      std::size_t needed = controls.max_subfields;
      if (controls.subfield_set && controls.ordering == Ordering::ascending_mass)
        needed = std::min(needed, controls.subfield_set->indices().back());

      const double c2h = s.field.units.c * s.field.units.c / s.field.units.hbar;
      double cutoff = 1.5 * geometry::weyl_estimate(cs, 64);
      geometry::SpectrumEnumeration spectrum = geometry::enumerate_spectrum(cs, cutoff, eopts);
      std::size_t cursor = 0;
      double max_weight = 0.0;
      bool exhausted = false;

      std::vector<SubfieldContribution> done;
      LogSum total_p, total_m;
      bool converged = false;
      double tail = 0.0;

      while (!converged && done.size() < needed && !exhausted) {
        // Gather the next batch of coupled subfields in ascending eigenvalue order.
        std::vector<Candidate> batch;
        while (batch.size() < subfield_block && done.size() + batch.size() < needed) {
          if (cursor == spectrum.modes.size()) {
            cutoff *= 4.0;
            try {
              spectrum = geometry::enumerate_spectrum(cs, cutoff, eopts);
            } catch (const DomainError&) {
              exhausted = true;
              break;
            }
            if (cursor == spectrum.modes.size()) continue;
          }
          const auto& mode = spectrum.modes[cursor++];
          const double c = detector::transverse_coefficient(cs, s.detector.smearing, mode);
          const double w = c * c;
          if (w == 0.0 || w <= 1e-20 * max_weight) continue;
          max_weight = std::max(max_weight, w);
          batch.push_back({mode, w});
        }
        if (batch.empty()) break;

        std::vector<SubfieldContribution> results(batch.size());
        numerics::parallel_for(batch.size(), [&](std::size_t i) {
          auto& r = results[i];
          r.mode = batch[i].mode;
          r.transverse_weight = batch[i].weight;
          r.effective_mass = subfields::effective_mass(s.field, r.mode.eigenvalue);
          const double mu = r.effective_mass * s.field.units.c / s.field.units.hbar;
          AxialSum a = axial_sum(s, mu, std::log(r.transverse_weight), controls);
          r.log_plus = a.plus.log();
          r.log_minus = a.minus.log();
          r.axial_terms = a.terms;
          r.converged = a.converged;
        });

        LogSum block_p, block_m;
        for (auto& r : results) {
          block_p.add(r.log_plus);
          block_m.add(r.log_minus);
          done.push_back(std::move(r));
        }
        total_p.add(block_p);
        total_m.add(block_m);

        const bool past_resonance = batch.front().mode.eigenvalue >= 0.0 &&
                                    subfields::effective_mass(s.field, batch.front().mode.eigenvalue) * c2h > s.detector.gap;
        const double scale = std::max(1.0, static_cast<double>(done.size()) / subfield_block);
        auto rel = [&](const LogSum& b, const LogSum& t) {
          if (b.empty()) return 0.0;
          if (t.empty()) return 1.0;
          return std::exp(b.log() - t.log()) * scale;
        };
        tail = std::max(rel(block_p, total_p), rel(block_m, total_m));
        if (past_resonance && tail < controls.tail_tolerance) converged = true;
      }
      // An explicit set in mass order is complete once its last position is reached.
      if (!converged && controls.subfield_set && controls.ordering == Ordering::ascending_mass &&
          done.size() >= needed)
        converged = true;
      return finish(std::move(done), controls, s, converged, tail);
    }

  } // namespace

  TransitionResult transition_probability_cylinder(const Scenario& scenario, const ModeSumControls& controls) {
    if (!scenario.field.cross_section.is_disk())
      throw DomainError("transition_probability_cylinder: requires a disk cross-section");
    return mode_sum(scenario, controls);
  }

  TransitionResult transition_probability_thermal_box(const Scenario& scenario, const ModeSumControls& controls) {
    const auto& cs = scenario.field.cross_section;
    if (!cs.is_rectangle() || cs.boundary() != geometry::Boundary::dirichlet)
      throw DomainError("transition_probability_thermal_box: requires a rectangular Dirichlet cross-section");
    return mode_sum(scenario, controls);
  }

  TransitionResult transition_probability(const Scenario& scenario, const ModeSumControls& controls) {
    if (scenario.field.cross_section.is_disk()) return transition_probability_cylinder(scenario, controls);
    if (scenario.field.cross_section.boundary() == geometry::Boundary::dirichlet)
      return transition_probability_thermal_box(scenario, controls);
    return mode_sum(scenario, controls);
  }

  double kernel_norm(const Scenario& scenario, Sign sign, const ModeSumControls& controls) {
    const TransitionResult r = transition_probability(scenario, controls);
    if (!r.converged && !controls.subfield_set)
      throw ConvergenceError("kernel_norm: mode sum did not converge", r.probability(sign), r.tail_estimate);
    const double hbar = scenario.field.units.hbar;
    return r.probability(sign) / (hbar * hbar);
  }

  KernelNorms kernel_norm(const Scenario& scenario, const subfields::SmearingFunction& F,
                          std::span<const geometry::TransverseMode> modes, int n_max, double z_begin, double z_end,
                          const ProjectionGrid& grid) {
    scenario.validate();
    if (n_max < 1) throw DomainError("kernel_norm: n_max must be >= 1");
    if (!(z_end > z_begin) || z_begin < 0.0 || z_end > scenario.field.length)
      throw DomainError("kernel_norm: invalid axial support");
    const auto& cs = scenario.field.cross_section;
    const auto& rule = numerics::gauss_legendre(grid.order);

    // Transverse nodes and weights.
    std::vector<std::vector<double>> points;
    std::vector<double> weights;
    if (cs.is_disk()) {
      const double R = cs.radius();
      const int pr = grid.transverse_panels, pp = 2 * grid.transverse_panels;
      for (int a = 0; a < pr; ++a)
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          const double r = R / pr * (a + 0.5 * (rule.nodes[i] + 1.0));
          const double wr = 0.5 * R / pr * rule.weights[i] * r;
          for (int b = 0; b < pp; ++b)
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
              const double phi = 2.0 * pi / pp * (b + 0.5 * (rule.nodes[k] + 1.0));
              points.push_back({r * std::cos(phi), r * std::sin(phi)});
              weights.push_back(wr * 0.5 * 2.0 * pi / pp * rule.weights[k]);
            }
        }
    } else {
      const auto& L = cs.lengths();
      points.push_back({});
      weights.push_back(1.0);
      for (double len : L) {
        std::vector<std::vector<double>> np;
        std::vector<double> nw;
        const double h = len / grid.transverse_panels;
        for (std::size_t p = 0; p < points.size(); ++p)
          for (int a = 0; a < grid.transverse_panels; ++a)
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
              auto q = points[p];
              q.push_back(h * (a + 0.5 * (rule.nodes[i] + 1.0)));
              np.push_back(std::move(q));
              nw.push_back(weights[p] * 0.5 * h * rule.weights[i]);
            }
        points = std::move(np);
        weights = std::move(nw);
      }
    }
    const std::size_t nm = modes.size();
    std::vector<double> psi(nm * points.size());
    for (std::size_t j = 0; j < nm; ++j)
      for (std::size_t p = 0; p < points.size(); ++p) psi[j * points.size() + p] = weights[p] * geometry::evaluate(cs, modes[j], points[p]);

    // Axial nodes; F_j(z) at each, then overlaps with sqrt(2/L) sin(n pi z/L).
    const double L = scenario.field.length;
    std::vector<double> coeff(nm * n_max, 0.0);
    const double hz = (z_end - z_begin) / grid.axial_panels;
    std::vector<double> fvals(points.size());
    for (int a = 0; a < grid.axial_panels; ++a)
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double z = z_begin + hz * (a + 0.5 * (rule.nodes[i] + 1.0));
        const double wz = 0.5 * hz * rule.weights[i];
        for (std::size_t p = 0; p < points.size(); ++p) fvals[p] = F(points[p], z);
        for (std::size_t j = 0; j < nm; ++j) {
          double fj = 0.0;
          const double* row = &psi[j * points.size()];
          for (std::size_t p = 0; p < points.size(); ++p) fj += row[p] * fvals[p];
          for (int n = 1; n <= n_max; ++n)
            coeff[j * n_max + (n - 1)] += wz * fj * std::sqrt(2.0 / L) * numerics::sin_pi(n * (z / L));
        }
      }

    LogSum plus, minus;
    for (std::size_t j = 0; j < nm; ++j) {
      const double mu = subfields::effective_mass(scenario.field, modes[j].eigenvalue) * scenario.field.units.c /
                        scenario.field.units.hbar;
      for (int n = 1; n <= n_max; ++n) {
        const double f = coeff[j * n_max + (n - 1)];
        if (f == 0.0) continue;
        const double omega = scenario.field.units.c * std::hypot(mu, n * pi / L);
        const double lf = 2.0 * std::log(std::abs(f));
        plus.add(lf + log_mode_weight(scenario, omega, Sign::plus));
        minus.add(lf + log_mode_weight(scenario, omega, Sign::minus));
      }
    }
    const double hbar2 = scenario.field.units.hbar * scenario.field.units.hbar;
    return {plus.value() / hbar2, minus.value() / hbar2};
  }

} // namespace cavred::response
