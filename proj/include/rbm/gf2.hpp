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

#ifndef RBM_GF2_HPP_
#define RBM_GF2_HPP_

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "rbm/bitvec.hpp"

namespace rbm {

// Dense matrix over GF(2), stored as a sequence of packed rows.
class GF2Matrix {
 public:
  GF2Matrix() = default;
  GF2Matrix(std::size_t rows, std::size_t cols)
      : cols_(cols), rows_(rows, BitVec(cols)) {}

  static GF2Matrix identity(std::size_t n);
  // Rows must all have the same length; `cols` is only consulted when `rows`
  // is empty.
  static GF2Matrix from_rows(std::vector<BitVec> rows, std::size_t cols = 0);
  static GF2Matrix from_columns(std::span<const BitVec> columns,
                                std::size_t rows);
  // Convenience for literals: {{1,0,1},{0,1,1}}.
  static GF2Matrix from_dense(
      std::initializer_list<std::initializer_list<int>> entries);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t i, std::size_t j) const { return rows_[i].test(j); }
  void set(std::size_t i, std::size_t j, bool value = true) {
    rows_[i].set(j, value);
  }

  const BitVec& row(std::size_t i) const { return rows_[i]; }
  BitVec& row(std::size_t i) { return rows_[i]; }
  BitVec column(std::size_t j) const;
  std::vector<BitVec> columns() const;

  GF2Matrix transpose() const;
  GF2Matrix select_rows(std::span<const std::size_t> indices) const;
  GF2Matrix select_columns(std::span<const std::size_t> indices) const;

  bool is_identity() const;
  bool is_zero() const;

  friend bool operator==(const GF2Matrix&, const GF2Matrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<BitVec> rows_;
};

std::ostream& operator<<(std::ostream& os, const GF2Matrix& m);

// Row-reduction record: transform * input == reduced.
struct EchelonResult {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
  GF2Matrix reduced;
  GF2Matrix transform;
};

// Affine solution set of a.x = b. `particular` is empty when the system is
// inconsistent.
struct SolutionSet {
  std::optional<BitVec> particular;
  std::vector<BitVec> null_basis;

  bool empty() const { return !particular.has_value(); }
};

GF2Matrix multiply(const GF2Matrix& a, const GF2Matrix& b);
BitVec multiply(const GF2Matrix& a, const BitVec& x);

std::size_t rank(const GF2Matrix& m);

// Reduced row-echelon form. Pivots are chosen column by column, taking the
// lowest-indexed eligible row.
EchelonResult echelon(const GF2Matrix& m);

// Throws SingularMatrix if m is not square and of full rank.
GF2Matrix invert(const GF2Matrix& m);

SolutionSet solve(const GF2Matrix& a, const BitVec& b);

// Incrementally built basis of a subspace of GF(2)^n. Basis vectors are kept
// fully reduced against each other, so reduce() returns a canonical coset
// representative.
class XorBasis {
 public:
  explicit XorBasis(std::size_t length)
      : length_(length), slot_of_pivot_(length, kNoSlot) {}

  std::size_t dimension() const { return basis_.size(); }
  std::size_t length() const { return length_; }

  // Returns true and grows the basis iff v is outside the current span.
  bool insert(BitVec v);
  bool contains(const BitVec& v) const { return reduce(v).none(); }
  BitVec reduce(BitVec v) const;

  const std::vector<BitVec>& vectors() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

 private:
  static constexpr std::size_t kNoSlot = static_cast<std::size_t>(-1);

  std::size_t length_;
  std::vector<BitVec> basis_;
  std::vector<std::size_t> pivots_;
  std::vector<std::size_t> slot_of_pivot_;
};

}  // namespace rbm

#endif  // RBM_GF2_HPP_
