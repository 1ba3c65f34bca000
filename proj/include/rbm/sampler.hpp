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

#ifndef RBM_SAMPLER_HPP_
#define RBM_SAMPLER_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rbm/column_supports.hpp"
#include "rbm/gf2.hpp"
#include "rbm/rng.hpp"

namespace rbm {

// n x m matrix, each column a uniformly random k-subset of the rows.
struct ModelParams {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
};

// Uniform k-subset of [0, n), sorted. Floyd's algorithm: exactly k draws.
Support sample_k_subset(Rng& rng, std::size_t n, std::size_t k);

// Column j is drawn from stream derive_seed(p.seed, j).
ColumnSupports sample_columns(const ModelParams& p);
GF2Matrix sample_matrix(const ModelParams& p);

// Poisson(lambda) conditioned on being >= floor:
//   Pr(X = l) = lambda^l / (l! f_floor(lambda)),
//   f_B(lambda) = e^lambda - sum_{i<B} lambda^i / i!.
class TruncatedPoisson {
 public:
  TruncatedPoisson(double lambda, std::size_t floor);

  double lambda() const { return lambda_; }
  std::size_t floor() const { return floor_; }

  double pmf(std::size_t l) const;
  double mean() const;
  double variance() const;
  std::size_t sample(Rng& rng) const;

 private:
  double lambda_;
  std::size_t floor_;
  double log_norm_;          // log Pr(Po(lambda) >= floor)
  std::vector<double> cdf_;  // cdf_[i] = Pr(X <= floor + i)
};

// Mean of Poisson(lambda) conditioned on >= floor:
//   lambda f_{floor-1}(lambda) / f_floor(lambda).
double truncated_poisson_mean(double lambda, std::size_t floor);

// Solves truncated_poisson_mean(lambda, floor) == mean to relative 1e-12.
// Throws NoSolution unless mean > floor.
TruncatedPoisson truncated_poisson_for_mean(double mean, std::size_t floor);

// Row-count model of a k-sparse N x M matrix with M = sigma N whose rows are
// conditioned to carry at least ceil(gamma k sigma) ones: lambda is chosen so
// the mean row count is k sigma.
TruncatedPoisson truncated_poisson_lambda(std::size_t k, double sigma,
                                          double gamma);

struct DegreeConstrainedOptions {
  // Cap on redraws of the row-count vector until it sums to kM.
  // 0 means 10^4 * sqrt(M).
  std::size_t max_sum_retries = 0;
  // Cap on full redraws caused by a column repeating a row.
  std::size_t max_repeat_retries = 100000;
};

struct DegreeConstrainedStats {
  std::size_t sum_retries = 0;
  std::size_t repeat_retries = 0;
};

// Uniform N x M matrix with exactly k ones per column and every row sum
// >= min_row. Row counts are i.i.d. truncated Poisson conditioned on their
// total being kM; the kM slots are then shuffled and cut into columns of k,
// and the whole draw is rejected if some column hits a row twice. Throws
// Timeout when a retry cap is hit.
ColumnSupports sample_degree_constrained_columns(
    std::size_t N, std::size_t M, std::size_t k, std::size_t min_row,
    std::uint64_t seed, const DegreeConstrainedOptions& options = {},
    DegreeConstrainedStats* stats = nullptr);
GF2Matrix sample_degree_constrained(std::size_t N, std::size_t M,
                                    std::size_t k, std::size_t min_row,
                                    std::uint64_t seed,
                                    const DegreeConstrainedOptions& options = {});

}  // namespace rbm

#endif  // RBM_SAMPLER_HPP_
