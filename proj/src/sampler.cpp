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

#include "rbm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "rbm/errors.hpp"
#include "rbm/poisson.hpp"

namespace rbm {

Support sample_k_subset(Rng& rng, std::size_t n, std::size_t k) {
  if (k > n) {
    throw InvalidArgument("cannot choose " + std::to_string(k) +
                          " distinct rows out of " + std::to_string(n));
  }
  Support s;
  s.reserve(k);
  for (std::size_t j = n - k; j < n; ++j) {
    const auto t = static_cast<std::uint32_t>(rng.below(j + 1));
    if (std::find(s.begin(), s.end(), t) == s.end()) {
      s.push_back(t);
    } else {
      s.push_back(static_cast<std::uint32_t>(j));
    }
  }
  std::sort(s.begin(), s.end());
  return s;
}

ColumnSupports sample_columns(const ModelParams& p) {
  if (p.k > p.n) throw InvalidArgument("model needs k <= n");
  ColumnSupports out;
  out.nrows = p.n;
  out.columns.resize(p.m);
  for (std::size_t j = 0; j < p.m; ++j) {
    Rng rng(derive_seed(p.seed, j));
    out.columns[j] = sample_k_subset(rng, p.n, p.k);
  }
  return out;
}

GF2Matrix sample_matrix(const ModelParams& p) {
  return sample_columns(p).to_dense();
}

double truncated_poisson_mean(double lambda, std::size_t floor) {
  if (floor == 0) return lambda;
  const auto b = static_cast<long>(floor);
  return lambda * std::exp(log_poisson_upper_tail(lambda, b - 1) -
                           log_poisson_upper_tail(lambda, b));
}

TruncatedPoisson::TruncatedPoisson(double lambda, std::size_t floor)
    : lambda_(lambda), floor_(floor) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("truncated Poisson needs lambda > 0");
  }
  log_norm_ = log_poisson_upper_tail(lambda, static_cast<long>(floor));
  double total = 0.0;
  for (std::size_t l = floor;; ++l) {
    const double p = pmf(l);
    total += p;
    cdf_.push_back(total);
    const double next_ratio = lambda / static_cast<double>(l + 1);
    if (next_ratio < 1.0 && p * next_ratio / (1.0 - next_ratio) < 1e-17 * total) {
      break;
    }
    if (cdf_.size() > 100000000) throw InvalidArgument("lambda too large");
  }
  for (double& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

double TruncatedPoisson::pmf(std::size_t l) const {
  if (l < floor_) return 0.0;
  const double dl = static_cast<double>(l);
  return std::exp(dl * std::log(lambda_) - std::lgamma(dl + 1.0) - lambda_ -
                  log_norm_);
}

double TruncatedPoisson::mean() const {
  return truncated_poisson_mean(lambda_, floor_);
}

double TruncatedPoisson::variance() const {
  // E[X(X-1)] = lambda^2 f_{B-2} / f_B.
  const auto b = static_cast<long>(floor_);
  const double factorial_moment =
      lambda_ * lambda_ *
      std::exp(log_poisson_upper_tail(lambda_, b - 2) - log_norm_);
  const double mu = mean();
  return factorial_moment + mu - mu * mu;
}

std::size_t TruncatedPoisson::sample(Rng& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto idx = static_cast<std::size_t>(
      std::min(it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
  return floor_ + idx;
}

TruncatedPoisson truncated_poisson_for_mean(double mean, std::size_t floor) {
  if (!(mean > static_cast<double>(floor))) {
    throw NoSolution("mean " + std::to_string(mean) +
                     " is not above the floor " + std::to_string(floor));
  }
  if (floor == 0) return TruncatedPoisson(mean, 0);
  // The conditioned mean is increasing in lambda, exceeds lambda, and tends
  // to the floor as lambda -> 0.
  double lo = 1e-300;
  double hi = mean;
  for (int it = 0; it < 4000 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (truncated_poisson_mean(mid, floor) < mean) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return TruncatedPoisson(0.5 * (lo + hi), floor);
}

TruncatedPoisson truncated_poisson_lambda(std::size_t k, double sigma,
                                          double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw InvalidArgument("gamma must lie in [0, 1)");
  }
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  const double target = static_cast<double>(k) * sigma;
  const auto floor =
      static_cast<std::size_t>(std::ceil(gamma * target - 1e-9));
  return truncated_poisson_for_mean(target, floor);
}

ColumnSupports sample_degree_constrained_columns(
    std::size_t N, std::size_t M, std::size_t k, std::size_t min_row,
    std::uint64_t seed, const DegreeConstrainedOptions& options,
    DegreeConstrainedStats* stats) {
  if (N == 0 || k == 0 || k > N) {
    throw InvalidArgument("degree-constrained model needs 1 <= k <= N");
  }
  const std::size_t total = k * M;
  if (N * min_row > total) {
    throw InvalidArgument("N * min_row exceeds the kM ones available");
  }
  const std::size_t sum_cap =
      options.max_sum_retries != 0
          ? options.max_sum_retries
          : static_cast<std::size_t>(
                std::ceil(1e4 * std::sqrt(static_cast<double>(M))));

  const bool exact_counts = N * min_row == total;
  std::optional<TruncatedPoisson> rows;
  if (!exact_counts) {
    rows = truncated_poisson_for_mean(
        static_cast<double>(total) / static_cast<double>(N), min_row);
  }

  Rng rng(derive_seed(seed, 0));
  DegreeConstrainedStats local;
  std::vector<std::size_t> counts(N, min_row);
  std::vector<std::uint32_t> slots(total);
  std::vector<std::uint32_t> column(k);
  while (true) {
    if (!exact_counts) {
      std::size_t attempts = 0;
      while (true) {
        std::size_t sum = 0;
        for (std::size_t& c : counts) {
          c = rows->sample(rng);
          sum += c;
        }
        if (sum == total) break;
        ++local.sum_retries;
        if (++attempts > sum_cap) {
          throw Timeout("row counts never summed to kM after " +
                        std::to_string(attempts) + " attempts");
        }
      }
    }
    std::size_t pos = 0;
    for (std::size_t i = 0; i < N; ++i) {
      std::fill_n(slots.begin() + static_cast<std::ptrdiff_t>(pos), counts[i],
                  static_cast<std::uint32_t>(i));
      pos += counts[i];
    }
    for (std::size_t i = total; i > 1; --i) {
      std::swap(slots[i - 1], slots[rng.below(i)]);
    }

    ColumnSupports out;
    out.nrows = N;
    out.columns.resize(M);
    bool repeated = false;
    for (std::size_t j = 0; j < M && !repeated; ++j) {
      std::copy_n(slots.begin() + static_cast<std::ptrdiff_t>(j * k), k,
                  column.begin());
      std::sort(column.begin(), column.end());
      repeated = std::adjacent_find(column.begin(), column.end()) != column.end();
      out.columns[j].assign(column.begin(), column.end());
    }
    if (!repeated) {
      if (stats) *stats = local;
      return out;
    }
    if (++local.repeat_retries > options.max_repeat_retries) {
      throw Timeout("every draw repeated a row within a column; gave up after " +
                    std::to_string(local.repeat_retries) + " attempts");
    }
  }
}

GF2Matrix sample_degree_constrained(std::size_t N, std::size_t M,
                                    std::size_t k, std::size_t min_row,
                                    std::uint64_t seed,
                                    const DegreeConstrainedOptions& options) {
  return sample_degree_constrained_columns(N, M, k, min_row, seed, options)
      .to_dense();
}

}  // namespace rbm
