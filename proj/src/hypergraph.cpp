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

#include "rbm/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <string>

#include "rbm/errors.hpp"
#include "rbm/poisson.hpp"

namespace rbm {

Hypergraph::Hypergraph(std::size_t n_vertices, std::size_t k)
    : n_vertices_(n_vertices), k_(k) {
  if (k == 0) throw InvalidArgument("hypergraph edges need k >= 1");
}

void Hypergraph::add_edge(std::span<const Vertex> vertices) {
  if (vertices.size() != k_) {
    throw NonUniformColumn("edge has " + std::to_string(vertices.size()) +
                           " vertices, expected " + std::to_string(k_));
  }
  const std::size_t start = incidence_.size();
  incidence_.insert(incidence_.end(), vertices.begin(), vertices.end());
  auto first = incidence_.begin() + static_cast<std::ptrdiff_t>(start);
  std::sort(first, incidence_.end());
  if (std::adjacent_find(first, incidence_.end()) != incidence_.end() ||
      incidence_.back() >= n_vertices_) {
    incidence_.resize(start);
    throw InvalidArgument("edge vertices must be distinct and in range");
  }
}

std::vector<std::size_t> Hypergraph::degrees() const {
  std::vector<std::size_t> deg(n_vertices_, 0);
  for (Vertex v : incidence_) ++deg[v];
  return deg;
}

namespace {

void check_range(ColumnRange range, std::size_t ncols) {
  if (range.first > range.last || range.last > ncols) {
    throw InvalidArgument("column range [" + std::to_string(range.first) +
                          ", " + std::to_string(range.last) +
                          ") outside matrix with " + std::to_string(ncols) +
                          " columns");
  }
}

[[noreturn]] void non_uniform(std::size_t col, std::size_t got, std::size_t k) {
  throw NonUniformColumn("column " + std::to_string(col) + " has " +
                         std::to_string(got) + " ones, expected " +
                         std::to_string(k));
}

}  // namespace

Hypergraph from_columns(const GF2Matrix& m, ColumnRange range, std::size_t k) {
  check_range(range, m.cols());
  Hypergraph h(m.rows(), k);
  std::vector<Vertex> edge;
  for (std::size_t j = range.first; j < range.last; ++j) {
    edge.clear();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (m.get(i, j)) edge.push_back(static_cast<Vertex>(i));
    }
    if (edge.size() != k) non_uniform(j, edge.size(), k);
    h.add_edge(edge);
  }
  return h;
}

Hypergraph from_columns(const ColumnSupports& m, ColumnRange range,
                        std::size_t k) {
  check_range(range, m.ncols());
  Hypergraph h(m.nrows, k);
  for (std::size_t j = range.first; j < range.last; ++j) {
    if (m.columns[j].size() != k) non_uniform(j, m.columns[j].size(), k);
    h.add_edge(m.columns[j]);
  }
  return h;
}

namespace {

// Compressed vertex -> incident edges lists.
struct Incidence {
  std::vector<std::size_t> offset;
  std::vector<std::size_t> edges;

  explicit Incidence(const Hypergraph& h) : offset(h.n_vertices() + 1, 0) {
    for (std::size_t e = 0; e < h.num_edges(); ++e) {
      for (Vertex v : h.edge(e)) ++offset[v + 1];
    }
    std::partial_sum(offset.begin(), offset.end(), offset.begin());
    edges.resize(offset.back());
    std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
    for (std::size_t e = 0; e < h.num_edges(); ++e) {
      for (Vertex v : h.edge(e)) edges[fill[v]++] = e;
    }
  }
  std::span<const std::size_t> of(Vertex v) const {
    return {edges.data() + offset[v], offset[v + 1] - offset[v]};
  }
};

}  // namespace

CoreResult d_core(const Hypergraph& h, std::size_t d,
                  std::span<const Vertex> initial_order) {
  if (d == 0) throw InvalidArgument("core threshold d must be >= 1");
  const std::size_t n = h.n_vertices();
  if (!initial_order.empty() && initial_order.size() != n) {
    throw InvalidArgument("initial_order must list every vertex once");
  }
  const Incidence inc(h);
  std::vector<std::size_t> degree = h.degrees();
  std::vector<bool> edge_alive(h.num_edges(), true);
  std::vector<bool> queued(n, false);
  std::vector<bool> removed(n, false);

  std::deque<PeelStep> queue;
  auto seed = [&](Vertex v) {
    if (v >= n || queued[v]) {
      throw InvalidArgument("initial_order must list every vertex once");
    }
    if (degree[v] < d) {
      queued[v] = true;
      queue.push_back({v, 0});
    }
  };
  if (initial_order.empty()) {
    for (Vertex v = 0; v < n; ++v) seed(v);
  } else {
    for (Vertex v : initial_order) seed(v);
  }

  CoreResult result;
  while (!queue.empty()) {
    const PeelStep step = queue.front();
    queue.pop_front();
    removed[step.vertex] = true;
    result.peel_order.push_back(step);
    for (std::size_t e : inc.of(step.vertex)) {
      if (!edge_alive[e]) continue;
      edge_alive[e] = false;
      for (Vertex u : h.edge(e)) {
        if (u == step.vertex) continue;
        --degree[u];
        if (degree[u] < d && !queued[u]) {
          queued[u] = true;
          queue.push_back({u, step.round + 1});
        }
      }
    }
  }

  for (Vertex v = 0; v < n; ++v) {
    if (!removed[v]) result.vertices.push_back(v);
  }
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    if (edge_alive[e]) result.edge_indices.push_back(e);
  }
  return result;
}

bool is_valid_peel_witness(const Hypergraph& h, std::size_t d,
                           const CoreResult& core) {
  const Incidence inc(h);
  std::vector<std::size_t> degree = h.degrees();
  std::vector<bool> edge_alive(h.num_edges(), true);
  std::vector<bool> removed(h.n_vertices(), false);
  for (const PeelStep& step : core.peel_order) {
    if (step.vertex >= h.n_vertices() || removed[step.vertex]) return false;
    if (degree[step.vertex] >= d) return false;
    removed[step.vertex] = true;
    for (std::size_t e : inc.of(step.vertex)) {
      if (!edge_alive[e]) continue;
      edge_alive[e] = false;
      for (Vertex u : h.edge(e)) --degree[u];
    }
  }
  std::vector<Vertex> survivors;
  for (Vertex v = 0; v < h.n_vertices(); ++v) {
    if (removed[v]) continue;
    if (degree[v] < d) return false;
    survivors.push_back(v);
  }
  std::vector<std::size_t> live_edges;
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    if (edge_alive[e]) live_edges.push_back(e);
  }
  return survivors == core.vertices && live_edges == core.edge_indices;
}

double core_fixed_point_rhs(double x, std::size_t k, std::size_t d) {
  const double below = poisson_cdf(x, static_cast<long>(d) - 2);
  const double base = 1.0 - below;
  if (base <= 0.0) return std::numeric_limits<double>::infinity();
  return x / std::pow(base, static_cast<double>(k) - 1.0);
}

CorePrediction core_prediction(double c, std::size_t k, std::size_t d) {
  if (!(c > 0.0)) throw InvalidArgument("core_prediction needs c > 0");
  if (k < 2) throw InvalidArgument("core_prediction needs k >= 2");
  if (d < 1) throw InvalidArgument("core_prediction needs d >= 1");

  auto g = [&](double x) { return core_fixed_point_rhs(x, k, d) - c; };

  // Every root lies in (0, c] because the denominator is at most 1. Walk down
  // from c until g changes sign; the first crossing brackets the greatest root.
  constexpr int kGridSteps = 10000;
  const double step = c / kGridSteps;
  double hi = c;
  double lo = c;
  bool bracketed = g(c) <= 0.0;
  for (int i = 1; i < kGridSteps && !bracketed; ++i) {
    const double x = c - step * i;
    if (g(x) <= 0.0) {
      lo = x;
      hi = x + step;
      bracketed = true;
    }
  }

  CorePrediction p;
  if (!bracketed) return p;
  if (lo < hi) {
    // Invariant: g(lo) <= 0 < g(hi).
    while (hi - lo >= 1e-12 * c) {
      const double mid = 0.5 * (lo + hi);
      if (g(mid) <= 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }
  p.subcritical = false;
  p.x = 0.5 * (lo + hi);
  if (g(c) <= 0.0) p.x = c;
  p.vertex_fraction =
      std::clamp(1.0 - poisson_cdf(p.x, static_cast<long>(d) - 1), 0.0, 1.0);
  p.edge_fraction = std::clamp(
      std::pow(p.x / c, static_cast<double>(k) / (static_cast<double>(k) - 1.0)),
      0.0, 1.0);
  return p;
}

}  // namespace rbm
