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

#include "cavred/analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "cavred/io.hpp"

namespace cavred::analysis {

  using numerics::LogSum;
  using response::TransitionResult;

  namespace {
    constexpr double ln10 = 2.302585092994045684;
  }

  double delta_p(const TransitionResult& reference, const TransitionResult& truncated, Sign sign) {
    if (!reference.converged) throw DomainError("delta_p: reference mode sum is not converged");
    const double lp = reference.log_probability(sign);
    if (!std::isfinite(lp)) throw DomainError("delta_p: zero reference probability");
    const double lt = truncated.log_probability(sign);
    if (lt == -std::numeric_limits<double>::infinity()) return 1.0;
    return std::abs(-std::expm1(lt - lp));
  }

  std::size_t ConvergenceCurve::first_below(double threshold) const {
    for (const auto& p : points)
      if (p.delta < threshold) return p.n_sub;
    return 0;
  }

  ConvergenceCurve convergence_curve(const TransitionResult& reference, Sign sign, std::size_t max_subfields,
                                     Ordering ordering) {
    if (max_subfields < 1) throw DomainError("convergence_curve: max_subfields must be >= 1");
    if (reference.ordering != ordering)
      throw DomainError("convergence_curve: reference was computed with a different ordering");
    const auto& c = reference.per_subfield;
    const double total = reference.log_probability(sign);
    if (!std::isfinite(total)) throw DomainError("convergence_curve: zero reference probability");
    // suffix[i] = log of the sum of contributions i, i+1, ...
    std::vector<double> suffix(c.size() + 1, -std::numeric_limits<double>::infinity());
    LogSum acc;
    for (std::size_t i = c.size(); i-- > 0;) {
      acc.add(c[i].log_value(sign));
      suffix[i] = acc.log();
    }
    ConvergenceCurve curve;
    curve.ordering = ordering;
    curve.sign = sign;
    for (std::size_t n = 1; n <= max_subfields; ++n) {
      const double ls = n < suffix.size() ? suffix[n] : -std::numeric_limits<double>::infinity();
      ConvergencePoint p;
      p.n_sub = n;
      p.log10_delta = (ls - total) / ln10;
      p.delta = std::exp(ls - total);
      curve.points.push_back(p);
    }
    return curve;
  }

  ConvergenceCurve convergence_scan(const response::Scenario& scenario, std::size_t max_subfields, Ordering ordering,
                                    Sign sign, response::ModeSumControls controls) {
    controls.tail_tolerance = std::min(controls.tail_tolerance, 1e-4);
    controls.ordering = ordering;
    controls.subfield_set.reset();
    const TransitionResult ref = response::transition_probability(scenario, controls);
    if (!ref.converged)
      throw ConvergenceError("convergence_scan: reference mode sum did not converge", ref.probability(sign),
                             ref.tail_estimate);
    return convergence_curve(ref, sign, max_subfields, ordering);
  }

  // ---------------------------------------------------------------------------

  L2Curve l2_truncation_curve(const geometry::CrossSection& cs, const detector::Smearing& smearing,
                              std::size_t max_subfields, double tail_tolerance) {
    if (max_subfields < 1) throw DomainError("l2_truncation_curve: max_subfields must be >= 1");
    if (smearing.kind == detector::SmearingKind::pointlike)
      throw DomainError("l2_truncation_curve: a pointlike smearing has no finite L2 norm");
    L2Curve out;
    if (smearing.kind == detector::SmearingKind::transverse_mode) {
      // Exactly one subfield carries the whole norm.
      out.modes = {smearing.mode};
      out.norm_squared = 1.0;
      out.delta = {0.0};
      return out;
    }
    constexpr std::size_t mode_limit = 20000;
    geometry::EnumerationOptions eopts;
    eopts.max_angular_order = detector::max_coupled_angular_order(cs, smearing);
    double cutoff = 1.5 * geometry::weyl_estimate(cs, 64);
    auto spectrum = geometry::enumerate_spectrum(cs, cutoff, eopts);
    std::size_t cursor = 0;

    std::vector<double> weights;
    double total = 0.0, block = 0.0, max_weight = 0.0;
    std::size_t in_block = 0;
    bool settled = false;
    while (cursor < mode_limit * 4) {
      if (cursor == spectrum.modes.size()) {
        cutoff *= 4.0;
        try {
          spectrum = geometry::enumerate_spectrum(cs, cutoff, eopts);
        } catch (const DomainError&) {
          break;
        }
        if (cursor == spectrum.modes.size()) continue;
      }
      const auto& mode = spectrum.modes[cursor++];
      const double c = detector::transverse_coefficient(cs, smearing, mode);
      const double w = c * c;
      if (w == 0.0 || w <= 1e-20 * max_weight) continue;
      max_weight = std::max(max_weight, w);
      weights.push_back(w);
      if (out.modes.size() < max_subfields) out.modes.push_back(mode);
      total += w;
      block += w;
      if (++in_block == 10) {
        if (weights.size() >= max_subfields && block < tail_tolerance * total) {
          settled = true;
          break;
        }
        block = 0.0;
        in_block = 0;
      }
      if (weights.size() >= mode_limit) break;
    }

    auto direct = [&]() -> double {
      const int d = cs.dimension();
      return std::pow(4.0 * numerics::pi * smearing.sigma * smearing.sigma, -0.5 * d);
    };
    subfields::ParsevalTotal t = settled ? subfields::ParsevalTotal{total, true} : subfields::ParsevalTotal{direct(), false};
    out.norm_squared = t.value;
    out.from_parseval = t.from_parseval;
    const std::size_t n = std::min(max_subfields, weights.size());
    for (std::size_t k = 1; k <= n; ++k)
      out.delta.push_back(subfields::l2_relative_error(t.value, std::span<const double>(weights.data(), k)));
    return out;
  }

  // ---------------------------------------------------------------------------

  std::string to_string(SweepVariable v) {
    switch (v) {
      case SweepVariable::omega_T: return "omega_T";
      case SweepVariable::n_sub: return "n_sub";
      case SweepVariable::beta: return "beta";
      case SweepVariable::sigma_over_R: return "sigma_over_R";
    }
    return "?";
  }

  std::string to_string(SweepOutput o) {
    switch (o) {
      case SweepOutput::delta_p_plus: return "delta_p_plus";
      case SweepOutput::delta_p_minus: return "delta_p_minus";
      case SweepOutput::delta_l2: return "delta_l2";
    }
    return "?";
  }

  void SweepSpec::validate() const {
    if (grid.empty()) throw DomainError("sweep: grid must be nonempty");
    const bool up = grid.size() < 2 || grid[1] > grid[0];
    for (std::size_t i = 1; i < grid.size(); ++i)
      if ((up && !(grid[i] > grid[i - 1])) || (!up && !(grid[i] < grid[i - 1])))
        throw DomainError("sweep: grid must be strictly monotone");
    if (variable == SweepVariable::n_sub) {
      for (double x : grid)
        if (!(x >= 1.0) || x != std::floor(x)) throw DomainError("sweep: n_sub grid values must be positive integers");
    } else if (n_sub.empty()) {
      throw DomainError("sweep: at least one n_sub value required");
    }
    for (std::size_t n : n_sub)
      if (n < 1) throw DomainError("sweep: n_sub values must be >= 1");
    controls.validate();
  }

  response::Scenario apply_sweep_value(const response::Scenario& base, SweepVariable variable, double x) {
    response::Scenario s = base;
    switch (variable) {
      case SweepVariable::omega_T:
        if (!(x > 0.0)) throw DomainError("sweep: omega_T must be positive");
        s.detector.switching.T = x / s.detector.gap;
        break;
      case SweepVariable::beta:
        s.state = response::FieldState::thermal(x);
        break;
      case SweepVariable::sigma_over_R: {
        if (!(x > 0.0)) throw DomainError("sweep: sigma_over_R must be positive");
        const auto& cs = s.field.cross_section;
        const double scale = cs.is_disk() ? cs.radius() : *std::min_element(cs.lengths().begin(), cs.lengths().end());
        if (s.detector.smearing.kind == detector::SmearingKind::pointlike)
          throw DomainError("sweep: sigma_over_R requires an extended smearing");
        s.detector.smearing.sigma = x * scale;
        break;
      }
      case SweepVariable::n_sub: break;
    }
    return s;
  }

  SweepTable sweep(const SweepSpec& spec, const std::vector<SweepOutput>& outputs) {
    spec.validate();
    if (outputs.empty()) throw DomainError("sweep: no outputs requested");
    std::vector<std::vector<SweepRow>> per_point(spec.grid.size());
    numerics::parallel_for(spec.grid.size(), [&](std::size_t g) {
      const double x = spec.grid[g];
      const response::Scenario s = apply_sweep_value(spec.fixed, spec.variable, x);
      std::vector<std::size_t> ns = spec.variable == SweepVariable::n_sub
                                        ? std::vector<std::size_t>{static_cast<std::size_t>(x)}
                                        : spec.n_sub;
      const std::size_t nmax = *std::max_element(ns.begin(), ns.end());
      std::optional<TransitionResult> ref;
      std::optional<L2Curve> l2;
      for (auto o : outputs) {
        if (o == SweepOutput::delta_l2 && !l2) l2 = l2_truncation_curve(s.field.cross_section, s.detector.smearing, nmax);
        if (o != SweepOutput::delta_l2 && !ref) {
          response::ModeSumControls c = spec.controls;
          c.tail_tolerance = std::min(c.tail_tolerance, 1e-4);
          c.ordering = spec.ordering;
          c.subfield_set.reset();
          ref = response::transition_probability(s, c);
          if (!ref->converged)
            throw ConvergenceError("sweep: reference mode sum did not converge at x = " + io::format_double(x),
                                   ref->P_plus, ref->tail_estimate);
        }
      }
      for (std::size_t n : ns)
        for (auto o : outputs) {
          SweepRow row;
          row.x = x;
          row.n_sub = n;
          row.output = o;
          if (o == SweepOutput::delta_l2) {
            row.value = n <= l2->delta.size() ? l2->delta[n - 1] : 0.0;
            row.log10_value = std::log10(row.value);
          } else {
            const Sign sign = o == SweepOutput::delta_p_plus ? Sign::plus : Sign::minus;
            const auto curve = convergence_curve(*ref, sign, n, spec.ordering);
            row.value = curve.points.back().delta;
            row.log10_value = curve.points.back().log10_delta;
          }
          per_point[g].push_back(row);
        }
    });
    SweepTable table;
    table.variable = spec.variable;
    for (auto& rows : per_point) table.rows.insert(table.rows.end(), rows.begin(), rows.end());
    return table;
  }

  void write_sweep_csv(std::ostream& out, const SweepTable& table) {
    out << "variable,x,n_sub,quantity,value,log10_value\n";
    for (const auto& r : table.rows)
      out << to_string(table.variable) << ',' << io::format_double(r.x) << ',' << r.n_sub << ',' << to_string(r.output)
          << ',' << io::format_double(r.value) << ',' << io::format_double(r.log10_value) << '\n';
  }

  std::vector<PlotSeries> sweep_series(const SweepTable& table) {
    std::vector<PlotSeries> series;
    for (const auto& r : table.rows) {
      const std::string label = to_string(r.output) + " N=" + std::to_string(r.n_sub);
      auto it = std::find_if(series.begin(), series.end(), [&](const PlotSeries& s) { return s.label == label; });
      if (it == series.end()) {
        series.push_back({label, {}, {}});
        it = series.end() - 1;
      }
      it->x.push_back(r.x);
      it->log10_y.push_back(r.log10_value);
    }
    return series;
  }

  namespace {
    std::string fmt(double v, const char* spec = "%.6g") {
      char buf[64];
      std::snprintf(buf, sizeof buf, spec, v);
      return buf;
    }
  } // namespace

  void write_svg_plot(std::ostream& out, const std::string& title, const std::string& x_label,
                      const std::vector<PlotSeries>& series, bool log_x) {
    constexpr double width = 720, height = 440, left = 70, right = 190, top = 40, bottom = 50;
    constexpr double floor_log = -16.0;
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    auto tx = [&](double x) { return log_x ? std::log10(x) : x; };
    auto clip = [&](double y) { return std::isfinite(y) ? std::max(y, floor_log) : (y > 0 ? 0.0 : floor_log); };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = 0.0, y1 = -16.0;
    for (const auto& s : series)
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        x0 = std::min(x0, tx(s.x[i]));
        x1 = std::max(x1, tx(s.x[i]));
        y0 = std::min(y0, clip(s.log10_y[i]));
        y1 = std::max(y1, clip(s.log10_y[i]));
      }
    if (!(x1 > x0)) {
      x0 -= 1.0;
      x1 += 1.0;
    }
    y0 = std::floor(y0);
    y1 = std::max(std::ceil(y1), y0 + 1.0);
    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double x) { return left + (tx(x) - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + (y1 - clip(y)) / (y1 - y0) * ph; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << left << "\" y=\"24\" font-size=\"14\">" << title << "</text>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    const double ystep = std::max(1.0, std::ceil((y1 - y0) / 8.0));
    for (double y = y1; y >= y0; y -= ystep) {
      const double yy = top + (y1 - y) / (y1 - y0) * ph;
      out << "<line x1=\"" << left - 4 << "\" y1=\"" << yy << "\" x2=\"" << left << "\" y2=\"" << yy
          << "\" stroke=\"black\"/>\n";
      out << "<text x=\"" << left - 8 << "\" y=\"" << yy + 4 << "\" text-anchor=\"end\">1e" << fmt(y, "%.0f")
          << "</text>\n";
    }
    for (int k = 0; k <= 4; ++k) {
      const double t = x0 + (x1 - x0) * k / 4.0;
      const double xx = left + pw * k / 4.0;
      out << "<line x1=\"" << xx << "\" y1=\"" << top + ph << "\" x2=\"" << xx << "\" y2=\"" << top + ph + 4
          << "\" stroke=\"black\"/>\n";
      out << "<text x=\"" << xx << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
          << fmt(log_x ? std::pow(10.0, t) : t) << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">" << x_label
        << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
      const char* color = palette[s % 10];
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < series[s].x.size(); ++i)
        out << fmt(px(series[s].x[i]), "%.2f") << ',' << fmt(py(series[s].log10_y[i]), "%.2f") << ' ';
      out << "\"/>\n";
      const double ly = top + 14 + 16 * s;
      out << "<line x1=\"" << width - right + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << width - right + 30
          << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << width - right + 36 << "\" y=\"" << ly << "\">" << series[s].label << "</text>\n";
    }
    out << "</svg>\n";
  }

} // namespace cavred::analysis
