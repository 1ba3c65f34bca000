// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rbm/poisson.hpp"

#include <cmath>
#include <limits>

namespace rbm {

double poisson_cdf(double x, long j) {
  if (j < 0) return 0.0;
  if (x <= 0.0) return 1.0;
  constexpr double kRescale = 1e250;
  const double log_rescale = std::log(kRescale);
  double term = 1.0;
  double sum = 0.0;
  double log_scale = 0.0;
  for (long i = 0; i <= j; ++i) {
    sum += term;
    term *= x / static_cast<double>(i + 1);
    if (term > kRescale) {
      term /= kRescale;
      sum /= kRescale;
      log_scale += log_rescale;
    }
  }
  const double value = std::exp(std::log(sum) + log_scale - x);
  return value > 1.0 ? 1.0 : value;
}

double log_poisson_upper_tail(double x, long j) {
  if (j <= 0) return 0.0;
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  if (static_cast<double>(j) > x) {
    // Terms decrease from index j onward: sum them relative to the first.
    const double log_first = static_cast<double>(j) * std::log(x) - x -
                             std::lgamma(static_cast<double>(j) + 1.0);
    double ratio_sum = 0.0;
    double t = 1.0;
    for (long i = j; t > 1e-18 * ratio_sum || i == j; ++i) {
      ratio_sum += t;
      t *= x / static_cast<double>(i + 1);
    }
    return log_first + std::log(ratio_sum);
  }
  return std::log1p(-poisson_cdf(x, j - 1));
}

}  // namespace rbm
