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

#include "rbm/gf2.hpp"

#include <string>
#include <utility>

namespace rbm {
namespace {

std::string shape(const GF2Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// In-place Gaussian elimination. Pivot rows are taken in column order, each
// from the lowest eligible row index. With `full`, entries above pivots are
// cleared too. Every row operation is mirrored on `transform` when given.
std::vector<std::size_t> eliminate(GF2Matrix& m, GF2Matrix* transform,
                                   bool full) {
  std::vector<std::size_t> pivots;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < m.cols() && pivot_row < m.rows(); ++col) {
    std::size_t found = pivot_row;
    while (found < m.rows() && !m.get(found, col)) ++found;
    if (found == m.rows()) continue;
    if (found != pivot_row) {
      std::swap(m.row(found), m.row(pivot_row));
      if (transform) std::swap(transform->row(found), transform->row(pivot_row));
    }
    const std::size_t start = full ? 0 : pivot_row + 1;
    for (std::size_t r = start; r < m.rows(); ++r) {
      if (r != pivot_row && m.get(r, col)) {
        m.row(r) ^= m.row(pivot_row);
        if (transform) transform->row(r) ^= transform->row(pivot_row);
      }
    }
    pivots.push_back(col);
    ++pivot_row;
  }
  return pivots;
}

}  // namespace

GF2Matrix GF2Matrix::identity(std::size_t n) {
  GF2Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

GF2Matrix GF2Matrix::from_rows(std::vector<BitVec> rows, std::size_t cols) {
  GF2Matrix m;
  m.cols_ = rows.empty() ? cols : rows.front().size();
  for (const BitVec& r : rows) {
    if (r.size() != m.cols_) {
      throw DimensionMismatch("rows of unequal length");
    }
  }
  m.rows_ = std::move(rows);
  return m;
}

GF2Matrix GF2Matrix::from_columns(std::span<const BitVec> columns,
                                  std::size_t rows) {
  GF2Matrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) {
      throw DimensionMismatch("column " + std::to_string(j) + " has length " +
                              std::to_string(columns[j].size()) +
                              ", expected " + std::to_string(rows));
    }
    for (std::size_t i = columns[j].first_set(); i != BitVec::npos;
         i = columns[j].next_set(i + 1)) {
      m.set(i, j);
    }
  }
  return m;
}

GF2Matrix GF2Matrix::from_dense(
    std::initializer_list<std::initializer_list<int>> entries) {
  const std::size_t cols = entries.size() == 0 ? 0 : entries.begin()->size();
  GF2Matrix m(entries.size(), cols);
  std::size_t i = 0;
  for (const auto& row : entries) {
    if (row.size() != cols) throw DimensionMismatch("ragged dense literal");
    std::size_t j = 0;
    for (int v : row) m.set(i, j++, (v & 1) != 0);
    ++i;
  }
  return m;
}

BitVec GF2Matrix::column(std::size_t j) const {
  BitVec c(rows());
  for (std::size_t i = 0; i < rows(); ++i) {
    if (rows_[i].test(j)) c.set(i);
  }
  return c;
}

std::vector<BitVec> GF2Matrix::columns() const {
  std::vector<BitVec> out(cols_, BitVec(rows()));
  for (std::size_t i = 0; i < rows(); ++i) {
    const BitVec& r = rows_[i];
    for (std::size_t j = r.first_set(); j != BitVec::npos; j = r.next_set(j + 1)) {
      out[j].set(i);
    }
  }
  return out;
}

GF2Matrix GF2Matrix::transpose() const {
  return from_rows(columns(), rows());
}

GF2Matrix GF2Matrix::select_rows(std::span<const std::size_t> indices) const {
  GF2Matrix out;
  out.cols_ = cols_;
  out.rows_.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= rows()) throw InvalidArgument("row index out of range");
    out.rows_.push_back(rows_[i]);
  }
  return out;
}

GF2Matrix GF2Matrix::select_columns(
    std::span<const std::size_t> indices) const {
  GF2Matrix out(rows(), indices.size());
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] >= cols_) throw InvalidArgument("column index out of range");
  }
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < indices.size(); ++j) {
      if (rows_[i].test(indices[j])) out.set(i, j);
    }
  }
  return out;
}

bool GF2Matrix::is_identity() const {
  if (rows() != cols_) return false;
  for (std::size_t i = 0; i < rows(); ++i) {
    if (rows_[i].count() != 1 || !rows_[i].test(i)) return false;
  }
  return true;
}

bool GF2Matrix::is_zero() const {
  for (const BitVec& r : rows_) {
    if (r.any()) return false;
  }
  return true;
}

std::ostream& operator<<(std::ostream& os, const GF2Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) os << m.row(i) << '\n';
  return os;
}

GF2Matrix multiply(const GF2Matrix& a, const GF2Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("cannot multiply " + shape(a) + " by " + shape(b));
  }
  GF2Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const BitVec& r = a.row(i);
    BitVec& acc = out.row(i);
    for (std::size_t j = r.first_set(); j != BitVec::npos; j = r.next_set(j + 1)) {
      acc ^= b.row(j);
    }
  }
  return out;
}

BitVec multiply(const GF2Matrix& a, const BitVec& x) {
  if (a.cols() != x.size()) {
    throw DimensionMismatch("cannot multiply " + shape(a) +
                            " by vector of length " + std::to_string(x.size()));
  }
  BitVec out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (a.row(i).dot(x)) out.set(i);
  }
  return out;
}

std::size_t rank(const GF2Matrix& m) {
  GF2Matrix work = m;
  return eliminate(work, nullptr, false).size();
}

EchelonResult echelon(const GF2Matrix& m) {
  EchelonResult result;
  result.reduced = m;
  result.transform = GF2Matrix::identity(m.rows());
  result.pivot_cols = eliminate(result.reduced, &result.transform, true);
  result.rank = result.pivot_cols.size();
  return result;
}

GF2Matrix invert(const GF2Matrix& m) {
  if (m.rows() != m.cols()) {
    throw SingularMatrix("cannot invert non-square " + shape(m) + " matrix");
  }
  GF2Matrix work = m;
  GF2Matrix inverse = GF2Matrix::identity(m.rows());
  const std::size_t r = eliminate(work, &inverse, true).size();
  if (r < m.rows()) {
    throw SingularMatrix("matrix is singular: rank " + std::to_string(r) +
                         " < " + std::to_string(m.rows()));
  }
  return inverse;
}

SolutionSet solve(const GF2Matrix& a, const BitVec& b) {
  if (b.size() != a.rows()) {
    throw DimensionMismatch("right-hand side has length " +
                            std::to_string(b.size()) + ", expected " +
                            std::to_string(a.rows()));
  }
  const EchelonResult e = echelon(a);
  const BitVec tb = multiply(e.transform, b);
  for (std::size_t i = e.rank; i < a.rows(); ++i) {
    if (tb.test(i)) return {};
  }

  SolutionSet out;
  BitVec x(a.cols());
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t i = 0; i < e.rank; ++i) {
    is_pivot[e.pivot_cols[i]] = true;
    if (tb.test(i)) x.set(e.pivot_cols[i]);
  }
  out.particular = std::move(x);
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    BitVec v(a.cols());
    v.set(f);
    for (std::size_t i = 0; i < e.rank; ++i) {
      if (e.reduced.get(i, f)) v.set(e.pivot_cols[i]);
    }
    out.null_basis.push_back(std::move(v));
  }
  return out;
}

BitVec XorBasis::reduce(BitVec v) const {
  if (v.size() != length_) throw DimensionMismatch("vector length mismatch");
  // Basis vectors vanish at each other's pivots, so the pivot bits present in
  // v are not disturbed by the XORs below.
  for (std::size_t i = v.first_set(); i != BitVec::npos; i = v.next_set(i + 1)) {
    if (slot_of_pivot_[i] != kNoSlot) v ^= basis_[slot_of_pivot_[i]];
  }
  return v;
}

bool XorBasis::insert(BitVec v) {
  v = reduce(std::move(v));
  const std::size_t pivot = v.first_set();
  if (pivot == BitVec::npos) return false;
  for (BitVec& b : basis_) {
    if (b.test(pivot)) b ^= v;
  }
  slot_of_pivot_[pivot] = basis_.size();
  pivots_.push_back(pivot);
  basis_.push_back(std::move(v));
  return true;
}

}  // namespace rbm
