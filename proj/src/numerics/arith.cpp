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

namespace cavred::numerics {

  double sin_pi(double x) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
    double r = std::fmod(x, 2.0);
    if (r < 0.0) r += 2.0;
    double sign = 1.0;
    if (r >= 1.0) {
      r -= 1.0;
      sign = -1.0;
    }
    if (r == 0.0) return 0.0;
    if (r > 0.5) r = 1.0 - r;
    if (r == 0.5) return sign;
    return sign * std::sin(pi * r);
  }

  double cos_pi(double x) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
    const double r = std::fmod(std::abs(x), 2.0);
    return sin_pi(0.5 - r);
  }

  double log_add(double a, double b) {
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    if (a == ninf) return b;
    if (b == ninf) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
  }

  void LogSum::add(double log_term) {
    if (std::isnan(log_term)) throw DomainError("LogSum: NaN term");
    if (log_term == -std::numeric_limits<double>::infinity()) return;
    if (log_term > max_) {
      scaled_ = (empty() ? 0.0 : scaled_ * std::exp(max_ - log_term)) + 1.0;
      max_ = log_term;
    } else {
      scaled_ += std::exp(log_term - max_);
    }
  }

  void LogSum::add(const LogSum& other) {
    if (other.empty()) return;
    if (empty()) {
      *this = other;
      return;
    }
    if (other.max_ > max_) {
      scaled_ = scaled_ * std::exp(max_ - other.max_) + other.scaled_;
      max_ = other.max_;
    } else {
      scaled_ += other.scaled_ * std::exp(other.max_ - max_);
    }
  }

  double LogSum::log() const {
    if (empty()) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(scaled_);
  }

} // namespace cavred::numerics
