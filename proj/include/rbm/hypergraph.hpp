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

#ifndef RBM_HYPERGRAPH_HPP_
#define RBM_HYPERGRAPH_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rbm/column_supports.hpp"
#include "rbm/gf2.hpp"

namespace rbm {

using Vertex = std::uint32_t;

// k-uniform hypergraph. Edge i keeps the index of the column it came from.
class Hypergraph {
 public:
  Hypergraph(std::size_t n_vertices, std::size_t k);

  // `vertices` must be k distinct in-range indices; they are stored sorted.
  void add_edge(std::span<const Vertex> vertices);

  std::size_t n_vertices() const { return n_vertices_; }
  std::size_t k() const { return k_; }
  std::size_t num_edges() const { return k_ == 0 ? 0 : incidence_.size() / k_; }
  std::span<const Vertex> edge(std::size_t i) const {
    return {incidence_.data() + i * k_, k_};
  }
  std::vector<std::size_t> degrees() const;

 private:
  std::size_t n_vertices_;
  std::size_t k_;
  std::vector<Vertex> incidence_;
};

// Half-open range [first, last) of column indices.
struct ColumnRange {
  std::size_t first = 0;
  std::size_t last = 0;
};

// Edge j is the support of column range.first + j. Throws NonUniformColumn if
// any selected column does not have exactly k ones.
Hypergraph from_columns(const GF2Matrix& m, ColumnRange range, std::size_t k);
Hypergraph from_columns(const ColumnSupports& m, ColumnRange range,
                        std::size_t k);

struct PeelStep {
  Vertex vertex = 0;
  std::size_t round = 0;  // 0 for vertices below the threshold at the start

  friend bool operator==(const PeelStep&, const PeelStep&) = default;
};

struct CoreResult {
  std::vector<Vertex> vertices;          // sorted
  std::vector<std::size_t> edge_indices; // sorted
  std::vector<PeelStep> peel_order;      // in removal order
};

// d-core by queue peeling: O(sum of edge sizes). `initial_order`, when
// non-empty, must be a permutation of the vertices and fixes the order in
// which under-degree vertices are first queued; the core itself does not
// depend on it. d = 1 removes isolated vertices only.
CoreResult d_core(const Hypergraph& h, std::size_t d,
                  std::span<const Vertex> initial_order = {});

// Replays `core.peel_order` on h and checks that every removal was of a
// vertex with live degree < d, and that the survivors match.
bool is_valid_peel_witness(const Hypergraph& h, std::size_t d,
                           const CoreResult& core);

// Fixed-point description of the d-core of a random k-uniform hypergraph with
// average degree c. `x` is the greatest root of
//   c = x / (1 - Pr(Po(x) <= d - 2))^(k-1)
// and the fractions are Pr(Po(x) >= d) for vertices and (x/c)^(k/(k-1)) for
// edges. When the equation has no positive root the core is empty
// (subcritical) and both fractions are 0.
struct CorePrediction {
  bool subcritical = true;
  double x = 0.0;
  double vertex_fraction = 0.0;
  double edge_fraction = 0.0;
};

CorePrediction core_prediction(double c, std::size_t k, std::size_t d);

// Right-hand side of the fixed-point equation at x.
double core_fixed_point_rhs(double x, std::size_t k, std::size_t d);

}  // namespace rbm

#endif  // RBM_HYPERGRAPH_HPP_
