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
#include <mutex>
#include <string>

#include <boost/math/special_functions/bessel.hpp>

namespace cavred::numerics {

  namespace {

    void require_argument(int m, double x, const char* name) {
      if (m < 0) throw DomainError(std::string(name) + ": order must be non-negative");
      if (!(x >= 0.0)) throw DomainError(std::string(name) + ": argument must be non-negative");
    }

    // e^{-x} I_0(x)
    double i0_scaled(double x) {
      if (x <= 30.0) {
        const double q = 0.25 * x * x;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 500; ++k) {
          term *= q / (double(k) * double(k));
          sum += term;
          if (term < 1e-17 * sum) break;
        }
        return sum * std::exp(-x);
      }
      // Hankel expansion; all terms positive for order zero. The smallest term
      // sits near k = 2x, far below double precision for x > 30.
      double term = 1.0;
      double sum = 1.0;
      for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= odd * odd / (8.0 * x * k);
        sum += term;
        if (term < 1e-17 * sum) break;
      }
      return sum / std::sqrt(2.0 * pi * x);
    }

    // I_m(x) / I_0(x) by backward recurrence, which is stable for I.
    double ratio_to_i0(int m, double x) {
      const int start = m + 20 + static_cast<int>(std::ceil(std::sqrt(80.0 * x)));
      double upper = 0.0;  // I_{nu+1}
      double current = 1.0; // I_nu
      double at_m = (start == m) ? current : 0.0;
      for (int nu = start; nu >= 1; --nu) {
        const double lower = (2.0 * nu / x) * current + upper;
        upper = current;
        current = lower;
        if (nu - 1 == m) at_m = current;
        if (std::abs(current) > 1e250) {
          current *= 1e-250;
          upper *= 1e-250;
          at_m *= 1e-250;
        }
      }
      return at_m / current;
    }

    // Ascending series for small arguments, any order.
    double i_series(int m, double x) {
      const double half = 0.5 * x;
      double term = std::exp(m * std::log(half) - std::lgamma(m + 1.0));
      double sum = term;
      const double q = half * half;
      for (int k = 1; k < 200; ++k) {
        term *= q / (double(k) * double(k + m));
        sum += term;
        if (term < 1e-17 * sum) break;
      }
      return sum;
    }

    double mcmahon_guess(int m, int l) {
      const double mu = 4.0 * m * m;
      const double beta = (l + 0.5 * m - 0.25) * pi;
      const double b8 = 8.0 * beta;
      return beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 * b8 * b8);
    }

    double bessel_j_derivative(int m, double x) {
      if (m == 0) return -bessel_j(1, x);
      return 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x));
    }

    // Safeguarded Newton on a bracket containing exactly one sign change.
    double polish_zero(int m, double lo, double hi, double guess) {
      double f_lo = bessel_j(m, lo);
      double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
      for (int it = 0; it < 200; ++it) {
        const double f = bessel_j(m, x);
        if (f == 0.0) return x;
        if ((f < 0.0) == (f_lo < 0.0)) {
          lo = x;
          f_lo = f;
        } else {
          hi = x;
        }
        const double df = bessel_j_derivative(m, x);
        double next = (df != 0.0) ? x - f / df : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - x);
        x = next;
        if (step <= 4.0 * std::numeric_limits<double>::epsilon() * x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * x)
          return x;
      }
      return x;
    }

  } // namespace

  double bessel_j(int m, double x) {
    require_argument(m, x, "bessel_j");
    if (x == 0.0) return m == 0 ? 1.0 : 0.0;
    return boost::math::cyl_bessel_j(m, x);
  }

  double bessel_i_scaled(int m, double x) {
    require_argument(m, x, "bessel_i_scaled");
    if (x == 0.0) return m == 0 ? 1.0 : 0.0;
    if (x <= 1.0) return i_series(m, x) * std::exp(-x);
    const double base = i0_scaled(x);
    if (m == 0) return base;
    return base * ratio_to_i0(m, x);
  }

  double bessel_i(int m, double x) {
    require_argument(m, x, "bessel_i");
    if (x <= 1.0) return x == 0.0 ? (m == 0 ? 1.0 : 0.0) : i_series(m, x);
    const double scaled = bessel_i_scaled(m, x);
    if (scaled == 0.0) return 0.0;
    const double log_value = std::log(scaled) + x;
    if (log_value >= std::log(std::numeric_limits<double>::max()))
      throw OverflowError("bessel_i: I_" + std::to_string(m) + "(" + std::to_string(x) +
                          ") exceeds the double range; use bessel_i_scaled");
    return std::exp(log_value);
  }

  // ---------------------------------------------------------------------------

  double BesselZeroTable::zero(int m, int l) {
    if (m < 0) throw DomainError("bessel_zero: order must be non-negative");
    if (l < 1) throw DomainError("bessel_zero: index must be >= 1");
    {
      std::shared_lock lock(mutex_);
      if (static_cast<std::size_t>(m) < zeros_.size() && static_cast<std::size_t>(l) <= zeros_[m].size())
        return zeros_[m][l - 1];
    }
    std::unique_lock lock(mutex_);
    return compute(m, l);
  }

  std::size_t BesselZeroTable::size() const {
    std::shared_lock lock(mutex_);
    std::size_t n = 0;
    for (const auto& row : zeros_) n += row.size();
    return n;
  }

  // Caller holds the exclusive lock. Order mm needs l + (m - mm) zeros so
  // that every bracket (x_{mm-1,k}, x_{mm-1,k+1}) up to order m is available.
  double BesselZeroTable::compute(int m, int l) {
    if (zeros_.size() <= static_cast<std::size_t>(m)) zeros_.resize(m + 1);
    for (int order = 0; order <= m; ++order) {
      const std::size_t needed = static_cast<std::size_t>(l + (m - order));
      auto& row = zeros_[order];
      while (row.size() < needed) {
        const int index = static_cast<int>(row.size()) + 1;
        double lo, hi;
        if (order == 0) {
          lo = (index - 0.25) * pi;
          hi = (index - 0.125) * pi;
        } else {
          lo = zeros_[order - 1][index - 1];
          hi = zeros_[order - 1][index];
        }
        row.push_back(polish_zero(order, lo, hi, mcmahon_guess(order, index)));
      }
    }
    return zeros_[m][l - 1];
  }

  BesselZeroTable& bessel_zero_table() {
    static BesselZeroTable table;
    return table;
  }

  double bessel_zero(int m, int l) { return bessel_zero_table().zero(m, l); }

} // namespace cavred::numerics
