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

#include "rbm/matroid.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <utility>

#include "rbm/column_supports.hpp"
#include "rbm/errors.hpp"

namespace rbm {

BinaryMatroid::BinaryMatroid(GF2Matrix rep) : rep_(std::move(rep)) {
  labels_.resize(rep_.cols());
  std::iota(labels_.begin(), labels_.end(), Label{0});
  for (std::size_t i = 0; i < labels_.size(); ++i) index_.emplace(labels_[i], i);
}

BinaryMatroid::BinaryMatroid(GF2Matrix rep, std::vector<Label> labels)
    : rep_(std::move(rep)), labels_(std::move(labels)) {
  if (labels_.size() != rep_.cols()) {
    throw DimensionMismatch("matroid has " + std::to_string(rep_.cols()) +
                            " columns but " + std::to_string(labels_.size()) +
                            " labels");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw InvalidArgument("duplicate element label " +
                            std::to_string(labels_[i]));
    }
  }
}

bool BinaryMatroid::has_label(Label l) const { return index_.contains(l); }

std::size_t BinaryMatroid::position(Label l) const {
  const auto it = index_.find(l);
  if (it == index_.end()) {
    throw UnknownLabel("no element labelled " + std::to_string(l));
  }
  return it->second;
}

std::vector<std::size_t> BinaryMatroid::positions(
    std::span<const Label> ls) const {
  std::vector<std::size_t> out;
  out.reserve(ls.size());
  for (Label l : ls) out.push_back(position(l));
  return out;
}

std::size_t BinaryMatroid::rank() const { return rbm::rank(rep_); }

std::size_t BinaryMatroid::rank(std::span<const Label> subset) const {
  XorBasis basis(rep_.rows());
  for (std::size_t p : positions(subset)) basis.insert(rep_.column(p));
  return basis.dimension();
}

bool BinaryMatroid::is_independent(std::span<const Label> subset) const {
  return rank(subset) == subset.size();
}

BinaryMatroid delete_elements(const BinaryMatroid& m,
                              std::span<const Label> s) {
  std::vector<bool> drop(m.size(), false);
  for (std::size_t p : m.positions(s)) drop[p] = true;
  std::vector<Label> kept;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!drop[i]) kept.push_back(m.labels()[i]);
  }
  return restrict_to(m, kept);
}

BinaryMatroid restrict_to(const BinaryMatroid& m, std::span<const Label> kept) {
  const std::vector<std::size_t> pos = m.positions(kept);
  return BinaryMatroid(m.rep().select_columns(pos),
                       std::vector<Label>(kept.begin(), kept.end()));
}

BinaryMatroid contract(const BinaryMatroid& m, std::span<const Label> s) {
  const std::vector<std::size_t> pos = m.positions(s);
  GF2Matrix work = m.rep();
  std::vector<bool> row_used(work.rows(), false);
  std::vector<bool> col_dropped(work.cols(), false);
  for (std::size_t c : pos) {
    if (col_dropped[c]) {
      throw DependentContractionSet("element " +
                                    std::to_string(m.labels()[c]) +
                                    " listed twice");
    }
    col_dropped[c] = true;
    std::size_t pivot = 0;
    while (pivot < work.rows() && (row_used[pivot] || !work.get(pivot, c))) {
      ++pivot;
    }
    if (pivot == work.rows()) {
      throw DependentContractionSet("element " +
                                    std::to_string(m.labels()[c]) +
                                    " is spanned by the rest of the set");
    }
    row_used[pivot] = true;
    for (std::size_t r = 0; r < work.rows(); ++r) {
      if (r != pivot && work.get(r, c)) work.row(r) ^= work.row(pivot);
    }
  }
  std::vector<std::size_t> rows, cols;
  std::vector<Label> labels;
  for (std::size_t r = 0; r < work.rows(); ++r) {
    if (!row_used[r]) rows.push_back(r);
  }
  for (std::size_t c = 0; c < work.cols(); ++c) {
    if (!col_dropped[c]) {
      cols.push_back(c);
      labels.push_back(m.labels()[c]);
    }
  }
  return BinaryMatroid(work.select_rows(rows).select_columns(cols),
                       std::move(labels));
}

namespace {

bool equal_from(std::size_t i, const std::vector<BitVec>& ca,
                const std::vector<BitVec>& cb, const XorBasis& ba,
                const XorBasis& bb) {
  if (i == ca.size()) return true;
  if (!equal_from(i + 1, ca, cb, ba, bb)) return false;
  XorBasis na = ba;
  XorBasis nb = bb;
  if (na.insert(ca[i]) != nb.insert(cb[i])) return false;
  return equal_from(i + 1, ca, cb, na, nb);
}

// rank_table[mask] for every subset of positions.
std::vector<std::uint8_t> rank_table(const std::vector<BitVec>& cols,
                                     std::size_t rows) {
  const std::size_t n = cols.size();
  std::vector<std::uint8_t> table(std::size_t{1} << n, 0);
  std::function<void(std::size_t, std::size_t, const XorBasis&)> walk =
      [&](std::size_t i, std::size_t mask, const XorBasis& basis) {
        if (i == n) {
          table[mask] = static_cast<std::uint8_t>(basis.dimension());
          return;
        }
        walk(i + 1, mask, basis);
        XorBasis next = basis;
        next.insert(cols[i]);
        walk(i + 1, mask | (std::size_t{1} << i), next);
      };
  walk(0, 0, XorBasis(rows));
  return table;
}

// Per element: number of circuits through it, bucketed by circuit size.
std::vector<std::vector<std::size_t>> circuit_signature(
    const std::vector<std::uint8_t>& ranks, std::size_t n) {
  std::vector<std::vector<std::size_t>> sig(n, std::vector<std::size_t>(n + 1, 0));
  for (std::size_t mask = 1; mask < ranks.size(); ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (ranks[mask] + 1U != size) continue;
    bool minimal = true;
    for (std::size_t e = 0; e < n && minimal; ++e) {
      if ((mask >> e) & 1U) minimal = ranks[mask ^ (std::size_t{1} << e)] + 1U == size;
    }
    if (!minimal) continue;
    for (std::size_t e = 0; e < n; ++e) {
      if ((mask >> e) & 1U) ++sig[e][size];
    }
  }
  return sig;
}

}  // namespace

bool matroid_equal(const BinaryMatroid& a, const BinaryMatroid& b,
                   std::size_t max_elements) {
  if (a.size() != b.size()) return false;
  if (a.size() > max_elements) {
    throw TooLarge("exhaustive matroid comparison limited to " +
                   std::to_string(max_elements) + " elements");
  }
  return equal_from(0, a.rep().columns(), b.rep().columns(),
                    XorBasis(a.rep().rows()), XorBasis(b.rep().rows()));
}

std::optional<std::vector<std::size_t>> find_isomorphism(
    const BinaryMatroid& a, const BinaryMatroid& b, std::size_t max_elements) {
  const std::size_t n = a.size();
  if (b.size() != n) return std::nullopt;
  if (n > max_elements || n > 20) {
    throw TooLarge("isomorphism search limited to " +
                   std::to_string(max_elements) + " elements");
  }
  const auto ra = rank_table(a.rep().columns(), a.rep().rows());
  const auto rb = rank_table(b.rep().columns(), b.rep().rows());
  if (ra.back() != rb.back()) return std::nullopt;
  const auto sa = circuit_signature(ra, n);
  const auto sb = circuit_signature(rb, n);

  std::vector<std::size_t> perm(n);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> assign = [&](std::size_t i) {
    if (i == n) return true;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || sa[i] != sb[j]) continue;
      perm[i] = j;
      bool ok = true;
      const std::size_t below = (std::size_t{1} << i) - 1;
      // Check every subset of {0..i} that contains i.
      for (std::size_t sub = below;; sub = (sub - 1) & below) {
        std::size_t image = std::size_t{1} << j;
        for (std::size_t t = 0; t < i; ++t) {
          if ((sub >> t) & 1U) image |= std::size_t{1} << perm[t];
        }
        if (ra[sub | (std::size_t{1} << i)] != rb[image]) {
          ok = false;
          break;
        }
        if (sub == 0) break;
      }
      if (!ok) continue;
      used[j] = true;
      if (assign(i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  if (!assign(0)) return std::nullopt;
  return perm;
}

namespace {

// Advances `idx` (strictly increasing, values < n) to the next combination in
// lexicographic order. Returns false after the last one.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t r = idx.size();
  std::size_t i = r;
  while (i > 0) {
    --i;
    if (idx[i] < n - r + i) {
      ++idx[i];
      for (std::size_t t = i + 1; t < r; ++t) idx[t] = idx[t - 1] + 1;
      return true;
    }
  }
  return false;
}

// Cheap isomorphism invariant: number of loops and sorted sizes of the
// parallel classes of the non-loops. `cols` must be canonical coset
// representatives so that parallel elements compare equal.
std::vector<std::size_t> parallel_profile(std::vector<BitVec> cols) {
  std::sort(cols.begin(), cols.end(), [](const BitVec& a, const BitVec& b) {
    return lexicographic_less(a, b);
  });
  std::vector<std::size_t> profile{0};
  std::size_t i = 0;
  while (i < cols.size()) {
    std::size_t j = i;
    while (j < cols.size() && cols[j] == cols[i]) ++j;
    if (cols[i].none()) {
      profile[0] = j - i;
    } else {
      profile.push_back(j - i);
    }
    i = j;
  }
  std::sort(profile.begin() + 1, profile.end());
  return profile;
}

}  // namespace

std::optional<MinorCertificate> has_minor_bruteforce(
    const BinaryMatroid& m, const BinaryMatroid& target,
    const BruteForceOptions& options) {
  const std::size_t n = m.size();
  const std::size_t mu = target.size();
  if (n > options.max_elements) {
    throw TooLarge("brute-force minor search limited to " +
                   std::to_string(options.max_elements) + " elements");
  }
  if (mu > options.max_target) {
    throw TooLarge("brute-force minor search limited to targets of " +
                   std::to_string(options.max_target) + " elements");
  }
  if (mu > n) return std::nullopt;

  const std::vector<BitVec> cols = m.rep().columns();
  const std::size_t rows = m.rep().rows();
  const std::size_t target_rank = target.rank();
  const std::size_t m_rank = m.rank();
  if (target_rank > m_rank) return std::nullopt;
  const auto target_profile = parallel_profile(target.rep().columns());

  for (std::size_t csize = 0; csize + target_rank <= m_rank; ++csize) {
    std::vector<std::size_t> contract_pos(csize);
    std::iota(contract_pos.begin(), contract_pos.end(), std::size_t{0});
    do {
      XorBasis span(rows);
      bool independent = true;
      for (std::size_t p : contract_pos) independent = independent && span.insert(cols[p]);
      if (!independent) continue;

      std::vector<std::size_t> rest;
      std::vector<bool> in_contract(n, false);
      for (std::size_t p : contract_pos) in_contract[p] = true;
      for (std::size_t p = 0; p < n; ++p) {
        if (!in_contract[p]) rest.push_back(p);
      }
      if (rest.size() < mu) continue;
      std::vector<BitVec> reduced(n);
      for (std::size_t p : rest) reduced[p] = span.reduce(cols[p]);

      std::vector<std::size_t> pick(mu);
      std::iota(pick.begin(), pick.end(), std::size_t{0});
      do {
        std::vector<BitVec> minor_cols;
        minor_cols.reserve(mu);
        for (std::size_t t : pick) minor_cols.push_back(reduced[rest[t]]);
        XorBasis k_span(rows);
        for (const BitVec& c : minor_cols) k_span.insert(c);
        if (k_span.dimension() != target_rank) continue;
        if (parallel_profile(minor_cols) != target_profile) continue;

        const BinaryMatroid minor(GF2Matrix::from_columns(minor_cols, rows));
        const auto perm = find_isomorphism(minor, target, options.max_target);
        if (!perm) continue;

        MinorCertificate cert;
        std::vector<bool> in_kept(n, false);
        for (std::size_t p : contract_pos) cert.contract_set.push_back(m.labels()[p]);
        for (std::size_t t : pick) {
          cert.kept.push_back(m.labels()[rest[t]]);
          in_kept[rest[t]] = true;
        }
        cert.column_map = *perm;
        for (std::size_t p : rest) {
          if (!in_kept[p]) cert.delete_set.push_back(m.labels()[p]);
        }
        return cert;
      } while (next_combination(pick, rest.size()));
    } while (next_combination(contract_pos, n));
  }
  return std::nullopt;
}

bool verify_certificate(const BinaryMatroid& m, const MinorCertificate& cert,
                        const BinaryMatroid& target) {
  std::vector<int> role(m.size(), 0);
  auto claim = [&](std::span<const Label> ls) {
    bool ok = true;
    for (std::size_t p : m.positions(ls)) {
      ok = ok && role[p] == 0;
      role[p] = 1;
    }
    return ok;
  };
  const bool c_ok = claim(cert.contract_set);
  const bool d_ok = claim(cert.delete_set);
  const bool k_ok = claim(cert.kept);
  if (!c_ok || !d_ok || !k_ok) return false;

  const std::size_t mu = cert.kept.size();
  if (cert.column_map.size() != mu || mu != target.size()) return false;
  std::vector<Label> ordered(mu);
  std::vector<bool> hit(mu, false);
  for (std::size_t i = 0; i < mu; ++i) {
    const std::size_t t = cert.column_map[i];
    if (t >= mu || hit[t]) return false;
    hit[t] = true;
    ordered[t] = cert.kept[i];
  }

  // Deleting first is equivalent and keeps the elimination small.
  std::vector<Label> involved = cert.contract_set;
  involved.insert(involved.end(), cert.kept.begin(), cert.kept.end());
  const BinaryMatroid minor =
      restrict_to(contract(restrict_to(m, involved), cert.contract_set), ordered);
  return matroid_equal(minor, target);
}

BinaryMatroid fano_matroid() {
  GF2Matrix rep(3, 7);
  for (std::size_t j = 0; j < 7; ++j) {
    for (std::size_t i = 0; i < 3; ++i) {
      if (((j + 1) >> i) & 1U) rep.set(i, j);
    }
  }
  return BinaryMatroid(std::move(rep));
}

void write_matroid(std::ostream& os, const BinaryMatroid& m) {
  write_column_supports(os, ColumnSupports::from_dense(m.rep()));
  os << "labels:";
  for (Label l : m.labels()) os << ' ' << l;
  os << '\n';
  if (!os) throw IOFailure("failed writing matroid");
}

BinaryMatroid read_matroid(std::istream& is) {
  const ColumnSupports cs = read_column_supports(is);
  std::string line;
  while (std::getline(is, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line.compare(start, 6, "labels") != 0) {
      throw ParseError("unexpected trailing line: " + line);
    }
    std::string body = line.substr(start + 6);
    if (!body.empty() && body.front() == ':') body.erase(0, 1);
    std::istringstream in(body);
    std::vector<Label> labels;
    long long v = 0;
    while (in >> v) {
      if (v < 0) throw ParseError("negative label");
      labels.push_back(static_cast<Label>(v));
    }
    if (!in.eof()) throw ParseError("bad label line: " + line);
    return BinaryMatroid(cs.to_dense(), std::move(labels));
  }
  return BinaryMatroid(cs.to_dense());
}

BinaryMatroid load_matroid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOFailure("cannot open " + path);
  return read_matroid(in);
}

}  // namespace rbm
