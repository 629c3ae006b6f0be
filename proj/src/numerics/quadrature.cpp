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

#include "cavred/numerics.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace cavred::numerics {

  namespace {

    // 21-point Kronrod rule with its embedded 10-point Gauss rule. Boost
    // supplies the nodes; the adaptive driver below is ours because we need
    // combined absolute/relative control and a non-throwing failure path.
    struct KronrodTable {
      std::vector<double> x;        // non-negative Kronrod nodes, x[0] = 0
      std::vector<double> wk;       // Kronrod weights
      std::vector<double> wg;       // Gauss weights on the same nodes, 0 where absent

      KronrodTable() {
        using K = boost::math::quadrature::gauss_kronrod<double, 21>;
        using G = boost::math::quadrature::gauss<double, 10>;
        x.assign(K::abscissa().begin(), K::abscissa().end());
        wk.assign(K::weights().begin(), K::weights().end());
        wg.assign(x.size(), 0.0);
        const auto& gx = G::abscissa();
        const auto& gw = G::weights();
        for (std::size_t i = 0; i < gx.size(); ++i)
          for (std::size_t k = 0; k < x.size(); ++k)
            if (std::abs(x[k] - gx[i]) < 1e-14) wg[k] = gw[i];
      }
    };

    const KronrodTable& kronrod() {
      static const KronrodTable table;
      return table;
    }

    struct Panel {
      double a, b, value, error;
      bool operator<(const Panel& other) const { return error < other.error; }
    };

    Panel apply_rule(const std::function<double(double)>& f, double a, double b) {
      const auto& t = kronrod();
      const double mid = 0.5 * (a + b);
      const double half = 0.5 * (b - a);
      double k = 0.0, g = 0.0;
      for (std::size_t i = 0; i < t.x.size(); ++i) {
        double fx;
        if (t.x[i] == 0.0) {
          fx = f(mid);
        } else {
          fx = f(mid - half * t.x[i]) + f(mid + half * t.x[i]);
        }
        k += t.wk[i] * fx;
        g += t.wg[i] * fx;
      }
      return {a, b, k * half, std::abs(k - g) * std::abs(half)};
    }

    QuadratureResult adaptive(const std::function<double(double)>& f, double a, double b, const QuadratureSpec& spec) {
      std::priority_queue<Panel> heap;
      Panel first = apply_rule(f, a, b);
      heap.push(first);
      double value = first.value;
      double error = first.error;
      int panels = 1;
      auto target = [&] { return std::max(spec.absolute_tolerance, spec.relative_tolerance * std::abs(value)); };
      while (!(error <= target()) && panels < spec.max_subdivisions) {
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
          heap.push(worst);
          break;
        }
        Panel left = apply_rule(f, worst.a, mid);
        Panel right = apply_rule(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
      }
      // Resum to drop drift from the running updates.
      value = 0.0;
      error = 0.0;
      while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
      }
      QuadratureResult result;
      result.value = value;
      result.error = error;
      result.subdivisions = panels;
      result.converged = std::isfinite(value) && error <= target();
      return result;
    }

  } // namespace

  void QuadratureSpec::validate() const {
    if (!(relative_tolerance > 0.0)) throw DomainError("quadrature: relative_tolerance must be positive");
    if (!(absolute_tolerance > 0.0)) throw DomainError("quadrature: absolute_tolerance must be positive");
    if (max_subdivisions < 1) throw DomainError("quadrature: max_subdivisions must be >= 1");
  }

  QuadratureResult integrate_1d_detailed(const std::function<double(double)>& f, double a, double b,
                                         const QuadratureSpec& spec) {
    spec.validate();
    if (std::isnan(a) || std::isnan(b)) throw DomainError("quadrature: NaN bound");
    if (a == b) return {0.0, 0.0, 0, true};
    if (a > b) {
      QuadratureResult r = integrate_1d_detailed(f, b, a, spec);
      r.value = -r.value;
      return r;
    }
    const bool lower_inf = std::isinf(a);
    const bool upper_inf = std::isinf(b);
    if (!lower_inf && !upper_inf) return adaptive(f, a, b, spec);

    std::function<double(double)> g;
    if (lower_inf && upper_inf) {
      g = [&f](double t) {
        const double s = 1.0 - t;
        const double x = t / s;
        return (f(x) + f(-x)) / (s * s);
      };
    } else if (upper_inf) {
      g = [&f, a](double t) {
        const double s = 1.0 - t;
        return f(a + t / s) / (s * s);
      };
    } else {
      g = [&f, b](double t) {
        const double s = 1.0 - t;
        return f(b - t / s) / (s * s);
      };
    }
    return adaptive(g, 0.0, 1.0, spec);
  }

  double integrate_1d(const std::function<double(double)>& f, double a, double b, const QuadratureSpec& spec) {
    const QuadratureResult r = integrate_1d_detailed(f, a, b, spec);
    if (!r.converged)
      throw ConvergenceError("integrate_1d: tolerance not reached after " + std::to_string(r.subdivisions) +
                                 " subdivisions",
                             r.value, r.error);
    return r.value;
  }

  namespace {

    template <int N> GaussRule make_rule() {
      using G = boost::math::quadrature::gauss<double, N>;
      const auto& x = G::abscissa();
      const auto& w = G::weights();
      GaussRule rule;
      for (std::size_t i = x.size(); i-- > 0;) {
        if (x[i] == 0.0) continue;
        rule.nodes.push_back(-x[i]);
        rule.weights.push_back(w[i]);
      }
      for (std::size_t i = 0; i < x.size(); ++i) {
        rule.nodes.push_back(x[i]);
        rule.weights.push_back(w[i]);
      }
      return rule;
    }

  } // namespace

  const GaussRule& gauss_legendre(int order) {
    static const GaussRule r8 = make_rule<8>();
    static const GaussRule r16 = make_rule<16>();
    static const GaussRule r20 = make_rule<20>();
    static const GaussRule r30 = make_rule<30>();
    switch (order) {
      case 8: return r8;
      case 16: return r16;
      case 20: return r20;
      case 30: return r30;
      default: throw DomainError("gauss_legendre: unsupported order " + std::to_string(order));
    }
  }

} // namespace cavred::numerics
