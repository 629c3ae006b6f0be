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

#include "cavred/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace cavred::geometry {

  using numerics::pi;

  std::string to_string(Boundary b) { return b == Boundary::dirichlet ? "dirichlet" : "neumann"; }

  std::string to_string(Parity p) {
    switch (p) {
      case Parity::cos: return "cos";
      case Parity::sin: return "sin";
      default: return "none";
    }
  }

  CrossSection CrossSection::rectangle(std::vector<double> lengths, Boundary boundary) {
    if (lengths.empty()) throw DomainError("rectangle: at least one length required");
    for (double l : lengths)
      if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("rectangle: lengths must be positive and finite");
    CrossSection cs;
    cs.lengths_ = std::move(lengths);
    cs.boundary_ = boundary;
    return cs;
  }

  CrossSection CrossSection::disk(double radius, Boundary boundary) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("disk: radius must be positive and finite");
    if (boundary != Boundary::dirichlet) throw DomainError("disk: only dirichlet boundary conditions are supported");
    CrossSection cs;
    cs.is_disk_ = true;
    cs.radius_ = radius;
    return cs;
  }

  int CrossSection::dimension() const { return is_disk_ ? 2 : static_cast<int>(lengths_.size()); }

  double CrossSection::volume() const {
    if (is_disk_) return pi * radius_ * radius_;
    double v = 1.0;
    for (double l : lengths_) v *= l;
    return v;
  }

  const std::vector<double>& CrossSection::lengths() const {
    if (is_disk_) throw DomainError("lengths() called on a disk");
    return lengths_;
  }

  double CrossSection::radius() const {
    if (!is_disk_) throw DomainError("radius() called on a rectangle");
    return radius_;
  }

  bool CrossSection::contains(std::span<const double> y) const {
    if (static_cast<int>(y.size()) != dimension()) return false;
    if (is_disk_) return std::hypot(y[0], y[1]) <= radius_;
    for (std::size_t k = 0; k < y.size(); ++k)
      if (y[k] < 0.0 || y[k] > lengths_[k]) return false;
    return true;
  }

  bool mode_less(const TransverseMode& a, const TransverseMode& b) {
    if (a.eigenvalue != b.eigenvalue) return a.eigenvalue < b.eigenvalue;
    if (a.multi_index != b.multi_index) return a.multi_index < b.multi_index;
    return static_cast<int>(a.parity) < static_cast<int>(b.parity);
  }

  std::string format_multi_index(const TransverseMode& mode) {
    std::ostringstream out;
    for (std::size_t k = 0; k < mode.multi_index.size(); ++k) {
      if (k) out << ' ';
      out << mode.multi_index[k];
    }
    if (mode.parity != Parity::none) out << ' ' << to_string(mode.parity);
    return out.str();
  }

  namespace {

    // Sum of (n_k pi / L_k)^2 with the terms sorted first, so permuted indices
    // on equal lengths give bit-identical eigenvalues.
    double rectangle_eigenvalue(const std::vector<double>& lengths, const std::vector<int>& indices) {
      std::vector<double> terms(indices.size());
      for (std::size_t k = 0; k < indices.size(); ++k) {
        const double kk = indices[k] * pi / lengths[k];
        terms[k] = kk * kk;
      }
      std::sort(terms.begin(), terms.end());
      double sum = 0.0;
      for (double t : terms) sum += t;
      return sum;
    }

  } // namespace

  TransverseMode rectangle_eigenpair(const std::vector<double>& lengths, const std::vector<int>& indices,
                                     Boundary boundary) {
    if (lengths.size() != indices.size()) throw DomainError("rectangle_eigenpair: index count must match dimension");
    TransverseMode mode;
    mode.multi_index = indices;
    mode.norm_constant = 1.0;
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const int n = indices[k];
      if (boundary == Boundary::dirichlet && n < 1)
        throw DomainError("rectangle_eigenpair: dirichlet indices must be >= 1");
      if (boundary == Boundary::neumann && n < 0)
        throw DomainError("rectangle_eigenpair: neumann indices must be >= 0");
      mode.norm_constant *= std::sqrt((n == 0 ? 1.0 : 2.0) / lengths[k]);
    }
    mode.eigenvalue = rectangle_eigenvalue(lengths, indices);
    return mode;
  }

  TransverseMode disk_eigenpair(double radius, int m, int l, Parity parity) {
    if (!(radius > 0.0)) throw DomainError("disk_eigenpair: radius must be positive");
    if (m < 0) throw DomainError("disk_eigenpair: m must be >= 0");
    if (l < 1) throw DomainError("disk_eigenpair: l must be >= 1");
    if (m == 0 && parity == Parity::sin) throw DomainError("disk_eigenpair: m = 0 has no sin mode");
    if (m > 0 && parity == Parity::none) throw DomainError("disk_eigenpair: m >= 1 requires cos or sin parity");
    const double x = numerics::bessel_zero(m, l);
    TransverseMode mode;
    mode.multi_index = {m, l};
    mode.parity = m == 0 ? Parity::none : parity;
    const double k = x / radius;
    mode.eigenvalue = k * k;
    mode.norm_constant = 1.0 / (std::sqrt(pi) * radius * std::abs(numerics::bessel_j(m + 1, x)));
    if (m > 0) mode.norm_constant *= std::sqrt(2.0);
    return mode;
  }

  double evaluate_polar(double radius, const TransverseMode& mode, double r, double phi) {
    const int m = mode.multi_index.at(0);
    const double x = numerics::bessel_zero(m, mode.multi_index.at(1));
    const double radial = numerics::bessel_j(m, x * r / radius);
    double angular = 1.0;
    if (mode.parity == Parity::cos) angular = std::cos(m * phi);
    if (mode.parity == Parity::sin) angular = std::sin(m * phi);
    return mode.norm_constant * radial * angular;
  }

  double evaluate(const CrossSection& cs, const TransverseMode& mode, std::span<const double> y) {
    if (static_cast<int>(y.size()) != cs.dimension()) throw DomainError("evaluate: point dimension mismatch");
    if (cs.is_disk()) {
      const double r = std::hypot(y[0], y[1]);
      if (r > cs.radius()) return 0.0;
      return evaluate_polar(cs.radius(), mode, r, std::atan2(y[1], y[0]));
    }
    const auto& lengths = cs.lengths();
    double value = mode.norm_constant;
    for (std::size_t k = 0; k < y.size(); ++k) {
      if (y[k] < 0.0 || y[k] > lengths[k]) return 0.0;
      const double arg = mode.multi_index[k] * y[k] / lengths[k];
      value *= cs.boundary() == Boundary::dirichlet ? numerics::sin_pi(arg) : numerics::cos_pi(arg);
    }
    return value;
  }

  // ---------------------------------------------------------------------------

  namespace {

    void enumerate_rectangle(const CrossSection& cs, double cutoff, const EnumerationOptions& options,
                             std::vector<TransverseMode>& out) {
      const auto& lengths = cs.lengths();
      const int d = cs.dimension();
      const int first = cs.boundary() == Boundary::dirichlet ? 1 : 0;
      std::vector<int> index(d, first);
      const double slack = cutoff * (1.0 + 1e-12);

      std::function<void(int, double)> recurse = [&](int k, double partial) {
        if (k == d) {
          const double lambda = rectangle_eigenvalue(lengths, index);
          if (lambda <= cutoff) {
            if (out.size() >= options.max_modes)
              throw DomainError("enumerate_spectrum: cutoff yields more than max_modes eigenpairs");
            out.push_back(rectangle_eigenpair(lengths, index, cs.boundary()));
          }
          return;
        }
        const int upper = static_cast<int>(std::ceil(std::sqrt(cutoff) * lengths[k] / pi));
        for (int n = first; n <= upper; ++n) {
          const double kk = n * pi / lengths[k];
          if (partial + kk * kk > slack) break;
          index[k] = n;
          recurse(k + 1, partial + kk * kk);
        }
        index[k] = first;
      };
      recurse(0, 0.0);
    }

    void enumerate_disk(const CrossSection& cs, double cutoff, const EnumerationOptions& options,
                        std::vector<TransverseMode>& out) {
      const double R = cs.radius();
      const double xmax = std::sqrt(cutoff) * R;
      // x_{m,1} > m, so orders beyond xmax cannot contribute.
      const int mmax = options.max_angular_order >= 0 ? std::min<int>(options.max_angular_order, static_cast<int>(xmax))
                                                      : static_cast<int>(xmax);
      for (int m = 0; m <= mmax; ++m) {
        if (numerics::bessel_zero(m, 1) / R * (numerics::bessel_zero(m, 1) / R) > cutoff) break;
        for (int l = 1;; ++l) {
          const double k = numerics::bessel_zero(m, l) / R;
          if (k * k > cutoff) break;
          const std::size_t add = m == 0 ? 1 : 2;
          if (out.size() + add > options.max_modes)
            throw DomainError("enumerate_spectrum: cutoff yields more than max_modes eigenpairs");
          if (m == 0) {
            out.push_back(disk_eigenpair(R, 0, l, Parity::none));
          } else {
            out.push_back(disk_eigenpair(R, m, l, Parity::cos));
            out.push_back(disk_eigenpair(R, m, l, Parity::sin));
          }
        }
      }
    }

  } // namespace

  SpectrumEnumeration enumerate_spectrum(const CrossSection& cs, double cutoff, const EnumerationOptions& options) {
    if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw DomainError("enumerate_spectrum: cutoff must be positive");
    SpectrumEnumeration result;
    result.cutoff_eigenvalue = cutoff;
    if (cs.is_disk())
      enumerate_disk(cs, cutoff, options, result.modes);
    else
      enumerate_rectangle(cs, cutoff, options, result.modes);
    std::sort(result.modes.begin(), result.modes.end(), mode_less);
    for (std::size_t j = 0; j < result.modes.size(); ++j) result.modes[j].sorted_index = j + 1;
    return result;
  }

  SpectrumEnumeration enumerate_first(const CrossSection& cs, std::size_t count, const EnumerationOptions& options) {
    if (count == 0) throw DomainError("enumerate_first: count must be >= 1");
    double cutoff = 1.5 * weyl_estimate(cs, count);
    for (int attempt = 0; attempt < 60; ++attempt) {
      SpectrumEnumeration e = enumerate_spectrum(cs, cutoff, options);
      if (e.modes.size() >= count) {
        e.modes.resize(count);
        e.cutoff_eigenvalue = e.modes.back().eigenvalue;
        return e;
      }
      cutoff *= 4.0;
    }
    throw DomainError("enumerate_first: could not reach the requested mode count");
  }

  double unit_ball_volume(int d) {
    if (d < 1) throw DomainError("unit_ball_volume: d must be >= 1");
    return std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
  }

  double weyl_estimate(const CrossSection& cs, std::size_t j) {
    if (j < 1) throw DomainError("weyl_estimate: j must be >= 1");
    const int d = cs.dimension();
    return 4.0 * pi * pi * std::pow(static_cast<double>(j) / (unit_ball_volume(d) * cs.volume()), 2.0 / d);
  }

  // ---------------------------------------------------------------------------

  namespace {

    double tensor_rectangle(const std::vector<double>& lengths, const std::function<double(std::span<const double>)>& f,
                            const numerics::GaussRule& rule, int panels) {
      const int d = static_cast<int>(lengths.size());
      std::vector<std::vector<double>> nodes(d), weights(d);
      for (int k = 0; k < d; ++k) {
        const double h = lengths[k] / panels;
        for (int p = 0; p < panels; ++p)
          for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            nodes[k].push_back(h * (p + 0.5 * (rule.nodes[i] + 1.0)));
            weights[k].push_back(0.5 * h * rule.weights[i]);
          }
      }
      std::vector<double> y(d);
      std::function<double(int)> recurse = [&](int k) -> double {
        if (k == d) return f(y);
        double s = 0.0;
        for (std::size_t i = 0; i < nodes[k].size(); ++i) {
          y[k] = nodes[k][i];
          s += weights[k][i] * recurse(k + 1);
        }
        return s;
      };
      return recurse(0);
    }

    double polar_disk(double R, const std::function<double(std::span<const double>)>& f,
                      const numerics::GaussRule& rule, int panels) {
      const double hr = R / panels;
      const double hp = 2.0 * pi / (2 * panels);
      double y[2];
      double total = 0.0;
      for (int pr = 0; pr < panels; ++pr)
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          const double r = hr * (pr + 0.5 * (rule.nodes[i] + 1.0));
          const double wr = 0.5 * hr * rule.weights[i] * r;
          double ring = 0.0;
          for (int pp = 0; pp < 2 * panels; ++pp)
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
              const double phi = hp * (pp + 0.5 * (rule.nodes[k] + 1.0));
              y[0] = r * std::cos(phi);
              y[1] = r * std::sin(phi);
              ring += 0.5 * hp * rule.weights[k] * f(std::span<const double>(y, 2));
            }
          total += wr * ring;
        }
      return total;
    }

  } // namespace

  CubatureResult integrate_over(const CrossSection& cs, const std::function<double(std::span<const double>)>& f,
                                const CubatureSpec& spec) {
    if (spec.initial_panels < 1 || spec.max_panels < spec.initial_panels)
      throw DomainError("integrate_over: invalid panel counts");
    const auto& rule = numerics::gauss_legendre(spec.order);
    auto estimate = [&](int panels) {
      return cs.is_disk() ? polar_disk(cs.radius(), f, rule, panels) : tensor_rectangle(cs.lengths(), f, rule, panels);
    };
    int panels = spec.initial_panels;
    double previous = estimate(panels);
    CubatureResult result{previous, std::numeric_limits<double>::infinity(), false};
    while (panels * 2 <= spec.max_panels) {
      panels *= 2;
      const double current = estimate(panels);
      result.value = current;
      result.error = std::abs(current - previous);
      if (result.error <= std::max(spec.absolute_tolerance, spec.relative_tolerance * std::abs(current))) {
        result.converged = true;
        break;
      }
      previous = current;
    }
    return result;
  }

} // namespace cavred::geometry
