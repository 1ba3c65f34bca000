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

#include "rbm/column_supports.hpp"

#include <fstream>
#include <sstream>

namespace rbm {

GF2Matrix ColumnSupports::to_dense() const {
  GF2Matrix m(nrows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (std::uint32_t i : columns[j]) m.set(i, j);
  }
  return m;
}

ColumnSupports ColumnSupports::from_dense(const GF2Matrix& m) {
  ColumnSupports out;
  out.nrows = m.rows();
  out.columns.resize(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const BitVec& r = m.row(i);
    for (std::size_t j = r.first_set(); j != BitVec::npos; j = r.next_set(j + 1)) {
      out.columns[j].push_back(static_cast<std::uint32_t>(i));
    }
  }
  return out;
}

void write_column_supports(std::ostream& os, const ColumnSupports& m) {
  os << m.nrows << ' ' << m.columns.size() << '\n';
  for (const Support& col : m.columns) {
    for (std::size_t t = 0; t < col.size(); ++t) {
      if (t) os << ' ';
      os << col[t];
    }
    os << '\n';
  }
  if (!os) throw IOFailure("failed writing matrix");
}

ColumnSupports read_column_supports(std::istream& is) {
  std::size_t line_no = 0;
  std::string line;
  auto fail = [&](const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
  };

  ColumnSupports m;
  std::size_t ncols = 0;
  do {
    if (!std::getline(is, line)) {
      throw ParseError("missing 'nrows ncols' header");
    }
    ++line_no;
  } while (line.find_first_not_of(" \t\r") == std::string::npos);
  {
    std::istringstream header(line);
    long long r = -1, c = -1;
    if (!(header >> r >> c) || r < 0 || c < 0) fail("expected 'nrows ncols'");
    std::string extra;
    if (header >> extra) fail("unexpected token '" + extra + "' in header");
    m.nrows = static_cast<std::size_t>(r);
    ncols = static_cast<std::size_t>(c);
  }

  m.columns.resize(ncols);
  for (std::size_t j = 0; j < ncols; ++j) {
    if (!std::getline(is, line)) {
      ++line_no;
      fail("expected " + std::to_string(ncols) + " column lines, got " +
           std::to_string(j));
    }
    ++line_no;
    std::istringstream in(line);
    std::string token;
    while (in >> token) {
      std::size_t used = 0;
      long long v = -1;
      try {
        v = std::stoll(token, &used);
      } catch (const std::exception&) {
        fail("bad row index '" + token + "'");
      }
      if (used != token.size() || v < 0) fail("bad row index '" + token + "'");
      if (static_cast<std::size_t>(v) >= m.nrows) {
        fail("row index " + token + " out of range");
      }
      Support& col = m.columns[j];
      if (!col.empty() && col.back() >= static_cast<std::uint32_t>(v)) {
        fail("row indices must be strictly increasing");
      }
      col.push_back(static_cast<std::uint32_t>(v));
    }
  }
  return m;
}

ColumnSupports load_column_supports(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOFailure("cannot open " + path);
  return read_column_supports(in);
}

void save_column_supports(const std::string& path, const ColumnSupports& m) {
  std::ofstream out(path);
  if (!out) throw IOFailure("cannot open " + path + " for writing");
  write_column_supports(out, m);
}

}  // namespace rbm
