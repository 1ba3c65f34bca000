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

#ifndef RBM_COLUMN_SUPPORTS_HPP_
#define RBM_COLUMN_SUPPORTS_HPP_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "rbm/gf2.hpp"

namespace rbm {

using Support = std::vector<std::uint32_t>;

// Sparse GF(2) matrix held as the sorted row supports of its columns. This is
// the in-memory form of the repository's matrix text format:
//
//   nrows ncols
//   <row indices of column 0, strictly increasing>
//   <row indices of column 1>
//   ...
struct ColumnSupports {
  std::size_t nrows = 0;
  std::vector<Support> columns;

  std::size_t ncols() const { return columns.size(); }

  GF2Matrix to_dense() const;
  static ColumnSupports from_dense(const GF2Matrix& m);

  friend bool operator==(const ColumnSupports&, const ColumnSupports&) = default;
};

void write_column_supports(std::ostream& os, const ColumnSupports& m);

// Reads one matrix. Trailing lines are left in the stream. Throws ParseError
// with the offending line number.
ColumnSupports read_column_supports(std::istream& is);

ColumnSupports load_column_supports(const std::string& path);
void save_column_supports(const std::string& path, const ColumnSupports& m);

}  // namespace rbm

#endif  // RBM_COLUMN_SUPPORTS_HPP_
