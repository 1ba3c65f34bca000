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

#ifndef RBM_POISSON_HPP_
#define RBM_POISSON_HPP_

namespace rbm {

// e^{-x} * sum_{i=0}^{j} x^i / i!, i.e. Pr(Po(x) <= j). Zero for j < 0.
// The partial sum is accumulated by forward recurrence and rescaled whenever
// a term exceeds 1e250, so x in the hundreds is fine.
double poisson_cdf(double x, long j);

// log Pr(Po(x) >= j). Zero for j <= 0.
double log_poisson_upper_tail(double x, long j);

}  // namespace rbm

#endif  // RBM_POISSON_HPP_
