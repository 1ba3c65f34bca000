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

#include "rbm/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace rbm {

void PipelineConfig::validate() const {
  if (!(zeta > 0.0 && zeta < 1.0)) throw InvalidArgument("zeta must lie in (0, 1)");
  if (!(m1_fraction > 0.0 && m1_fraction < 1.0)) {
    throw InvalidArgument("m1_fraction must lie in (0, 1)");
  }
  if (!(L > 0.0)) throw InvalidArgument("L must be positive");
  if (!(core_threshold_fraction >= 0.0)) {
    throw InvalidArgument("core_threshold_fraction must be non-negative");
  }
  if (omega < 1) throw InvalidArgument("omega must be at least 1");
  if (eps0 && !(*eps0 > 0.0 && *eps0 < 0.5)) {
    throw InvalidArgument("eps0 must lie in (0, 1/2)");
  }
  if (delta && !(*delta > 0.0 && *delta <= 1.0)) {
    throw InvalidArgument("delta must lie in (0, 1]");
  }
  if (max_K < 1 || max_K > 20) throw InvalidArgument("max_K must lie in [1, 20]");
}

RowIndex::RowIndex(std::vector<std::uint32_t> r, std::size_t n)
    : rows(std::move(r)), pos(n, -1) {
  std::sort(rows.begin(), rows.end());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= n) throw InvalidArgument("row index out of range");
    pos[rows[i]] = static_cast<std::int32_t>(i);
  }
}

bool RowIndex::covers(std::span<const std::uint32_t> support) const {
  return std::all_of(support.begin(), support.end(),
                     [&](std::uint32_t r) { return pos[r] >= 0; });
}

namespace {

std::size_t ceil_count(double x) {
  return static_cast<std::size_t>(std::ceil(x - 1e-9));
}

BitVec restrict_column(const Support& support, const RowIndex& rows) {
  BitVec v(rows.size());
  for (std::uint32_t r : support) {
    if (rows.pos[r] >= 0) v.set(static_cast<std::size_t>(rows.pos[r]));
  }
  return v;
}

std::uint32_t encode(const BitVec& v) {
  std::uint32_t x = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v.test(i)) x |= std::uint32_t{1} << i;
  }
  return x;
}

}  // namespace

B1Result build_b1(const ColumnSupports& a, const PipelineConfig& cfg) {
  const std::size_t n = a.nrows;
  const std::size_t k = cfg.k;
  B1Result out;
  out.m1 = static_cast<std::size_t>(std::floor(static_cast<double>(n) * cfg.m1_fraction));
  if (out.m1 == 0 || out.m1 > a.ncols()) {
    throw InvalidArgument("need floor(n * m1_fraction) = " +
                          std::to_string(out.m1) + " columns, have " +
                          std::to_string(a.ncols()));
  }
  out.threshold = std::max<std::size_t>(1, ceil_count(cfg.core_threshold_fraction * static_cast<double>(k)));
  const Hypergraph h = from_columns(a, ColumnRange{0, out.m1}, k);
  const CoreResult core = d_core(h, out.threshold);
  out.prediction = core_prediction(
      static_cast<double>(out.m1 * k) / static_cast<double>(n), k,
      out.threshold);
  if (core.vertices.empty()) {
    throw StageError("build_b1", "EmptyCore",
                     "the " + std::to_string(out.threshold) + "-core is empty",
                     {{"m1", out.m1},
                      {"threshold", out.threshold},
                      {"subcritical", out.prediction.subcritical},
                      {"predicted_x", out.prediction.x},
                      {"predicted_vertex_fraction", out.prediction.vertex_fraction}});
  }
  out.rows.assign(core.vertices.begin(), core.vertices.end());
  out.columns = core.edge_indices;
  return out;
}

SupportScan collect_support_columns(const ColumnSupports& a,
                                    const RowIndex& rows, std::size_t first,
                                    std::size_t count) {
  if (count < 1) throw InvalidArgument("count must be at least 1");
  SupportScan out;
  std::size_t j = first;
  for (; j < a.ncols() && out.columns.size() < count; ++j) {
    if (rows.covers(a.columns[j])) out.columns.push_back(j);
  }
  out.next_unviewed = j;
  if (out.columns.size() < count) {
    throw StageError("collect_support_columns", "InsufficientColumns",
                     "found " + std::to_string(out.columns.size()) + " of " +
                         std::to_string(count) + " columns",
                     {{"found", out.columns.size()}, {"requested", count}});
  }
  return out;
}

Basis build_basis(const ColumnSupports& a, const RowIndex& rows,
                  std::span<const std::size_t> b1,
                  std::span<const std::size_t> l1) {
  const std::size_t size = rows.size();
  Basis out;
  XorBasis span(size);
  std::vector<BitVec> cols;
  auto offer = [&](std::size_t j) {
    if (span.dimension() == size) return;
    BitVec v = restrict_column(a.columns[j], rows);
    if (span.insert(v)) {
      out.columns.push_back(j);
      cols.push_back(std::move(v));
    }
  };
  for (std::size_t j : b1) offer(j);
  out.from_b1 = out.columns.size();
  for (std::size_t j : l1) offer(j);
  if (span.dimension() < size) {
    throw StageError("build_basis", "RankDeficient",
                     "rank " + std::to_string(span.dimension()) + " of " +
                         std::to_string(size),
                     {{"rank", span.dimension()}, {"needed", size}});
  }
  out.B = GF2Matrix::from_columns(cols, size);
  out.B_inv = invert(out.B);
  return out;
}

RowSelection select_rows(std::span<const BitVec> complements, std::size_t r,
                         double delta) {
  if (r < 1) throw InvalidArgument("select_rows needs r >= 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("delta must lie in (0, 1]");
  if (complements.empty()) {
    throw StageError("select_rows", "BoundUnmet", "no sets to choose from",
                     {{"available", 0}, {"r", r}});
  }
  const std::size_t n = complements[0].size();
  const double dn = static_cast<double>(n);
  for (const BitVec& x : complements) {
    if (x.size() != n) throw DimensionMismatch("sets of different lengths");
    if (static_cast<double>(x.count()) < delta * dn - 1e-9) {
      throw InvalidArgument("a set has fewer than delta * n elements");
    }
  }

  RowSelection out;
  out.delta = delta;
  while ((std::size_t{1} << out.s) < r) ++out.s;
  std::vector<double> deltas{delta};
  for (std::size_t j = 0; j < out.s; ++j) deltas.push_back(deltas.back() * deltas.back() / 4.0);
  out.delta_s = deltas[out.s];
  out.bound = out.delta_s * dn / (2.0 * static_cast<double>(r));

  // Groups needed at each level so that the next level can still be filled.
  std::vector<std::size_t> cap(out.s + 1, 1);
  for (std::size_t j = out.s; j-- > 0;) {
    cap[j] = 2 * cap[j + 1] + static_cast<std::size_t>(std::ceil(2.0 / deltas[j]));
  }

  struct Group {
    std::vector<std::size_t> members;
    BitVec inter;
  };
  std::vector<std::size_t> order(complements.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return complements[x].count() > complements[y].count();
  });
  std::vector<Group> level;
  for (std::size_t i : order) level.push_back({{i}, complements[i]});

  for (std::size_t j = 0; j < out.s; ++j) {
    const double need = deltas[j + 1] * dn;
    std::vector<Group> next;
    std::vector<Group> pending;
    for (Group& g : level) {
      auto partner = std::find_if(pending.begin(), pending.end(), [&](const Group& p) {
        return static_cast<double>(p.inter.intersection_count(g.inter)) >= need;
      });
      if (partner == pending.end()) {
        pending.push_back(std::move(g));
        continue;
      }
      Group merged{partner->members, partner->inter & g.inter};
      merged.members.insert(merged.members.end(), g.members.begin(), g.members.end());
      pending.erase(partner);
      next.push_back(std::move(merged));
      if (next.size() == cap[j + 1]) break;
    }
    if (next.empty()) {
      throw StageError("select_rows", "BoundUnmet",
                       "no pair of level-" + std::to_string(j) + " groups meets " +
                           std::to_string(need),
                       {{"level", j}, {"groups", level.size()}, {"r", r}});
    }
    level = std::move(next);
  }

  const Group& best = level.front();
  out.rows.assign(best.members.begin(), best.members.begin() + static_cast<std::ptrdiff_t>(r));
  BitVec inter = complements[out.rows[0]];
  for (std::size_t i : out.rows) inter &= complements[i];
  out.intersection = inter.count();
  if (static_cast<double>(out.intersection) < out.bound) {
    throw StageError("select_rows", "BoundUnmet",
                     "intersection " + std::to_string(out.intersection) +
                         " below bound",
                     {{"intersection", out.intersection}, {"bound", out.bound}});
  }
  return out;
}

std::size_t sign_column(std::uint32_t sigma, std::size_t K) {
  return ((std::size_t{1} << K) - 1) - sigma;
}

std::uint32_t sign_sigma(std::size_t column, std::size_t K) {
  return static_cast<std::uint32_t>(((std::size_t{1} << K) - 1) - column);
}

Partition build_partition(std::span<const BitVec> row_supports,
                          std::span<const std::size_t> R, double eps1,
                          std::size_t n, std::size_t max_K) {
  const std::size_t K = R.size();
  if (K > max_K) {
    throw InvalidArgument("K = " + std::to_string(K) + " exceeds max_K = " +
                          std::to_string(max_K));
  }
  Partition out;
  AtomPartition& atoms = out.atoms;
  atoms.K = K;
  atoms.sigma_of_index.assign(n, 0);
  atoms.atom_sizes.assign(std::size_t{1} << K, 0);
  atoms.large_threshold = eps1 * static_cast<double>(n);
  for (std::size_t i = 0; i < K; ++i) {
    const BitVec& s = row_supports[R[i]];
    if (s.size() != n) throw DimensionMismatch("row support length differs from n");
    for (std::size_t j = s.first_set(); j != BitVec::npos; j = s.next_set(j + 1)) {
      atoms.sigma_of_index[j] |= std::uint32_t{1} << i;
    }
  }
  for (std::uint32_t sigma : atoms.sigma_of_index) ++atoms.atom_sizes[sigma];

  out.D = GF2Matrix(K, std::size_t{1} << K);
  for (std::uint32_t sigma = 0; sigma < atoms.atom_sizes.size(); ++sigma) {
    if (!atoms.is_large(sigma)) continue;
    for (std::size_t i = 0; i < K; ++i) {
      if ((sigma >> i) & 1U) out.D.set(i, sign_column(sigma, K));
    }
  }
  const std::size_t r = rank(out.D);
  if (r < K) {
    throw StageError("build_partition", "RankDeficientD",
                     "rank(D) = " + std::to_string(r) + " < K = " + std::to_string(K),
                     {{"rank", r}, {"K", K}, {"atom_sizes", atoms.atom_sizes}});
  }
  return out;
}

BitVec solve_target(const GF2Matrix& D, const AtomPartition& atoms,
                    const BitVec& target, std::size_t nu) {
  const std::size_t K = D.rows();
  if (target.size() != K) throw DimensionMismatch("target length differs from K");
  BitVec v(D.cols());
  const std::uint32_t want = encode(target);
  if (want == 0) return v;

  // Admissible nonzero columns in column order; each value occurs once.
  std::vector<std::size_t> cols;
  std::vector<std::uint32_t> values;
  std::unordered_map<std::uint32_t, std::size_t> where;
  for (std::size_t c = 0; c < D.cols(); ++c) {
    if (!atoms.is_large(sign_sigma(c, K))) continue;
    const std::uint32_t value = encode(D.column(c));
    if (value == 0) continue;
    where.emplace(value, cols.size());
    cols.push_back(c);
    values.push_back(value);
  }

  for (std::size_t w = 1; w <= std::min(nu, cols.size()); ++w) {
    std::vector<std::size_t> prefix(w - 1);
    std::iota(prefix.begin(), prefix.end(), std::size_t{0});
    while (true) {
      std::uint32_t acc = want;
      for (std::size_t p : prefix) acc ^= values[p];
      const auto it = where.find(acc);
      if (it != where.end() && (prefix.empty() || it->second > prefix.back())) {
        for (std::size_t p : prefix) v.set(cols[p]);
        v.set(cols[it->second]);
        return v;
      }
      // Next (w-1)-combination, leaving room for the last element.
      const std::size_t limit = cols.size() - 1;
      std::size_t i = prefix.size();
      bool advanced = false;
      while (i > 0) {
        --i;
        if (prefix[i] < limit - (prefix.size() - i)) {
          ++prefix[i];
          for (std::size_t t = i + 1; t < prefix.size(); ++t) prefix[t] = prefix[t - 1] + 1;
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
    }
  }
  throw StageError("solve_target", "NoAdmissibleSolution",
                   "no solution of weight <= " + std::to_string(nu),
                   {{"target", target.to_string()}, {"nu", nu}});
}

void even_k_adjust(const ColumnSupports& a, PipelineTrace& trace,
                   const PipelineConfig& cfg) {
  if (trace.k % 2 == 1) return;
  // Every column has an even number of ones, so the rows sum to zero.
  for (const Support& s : a.columns) {
    if (s.size() % 2 != 0) {
      throw NonUniformColumn("even-k adjustment needs every column to have even weight");
    }
  }
  (void)cfg;
  // The all-ones vector is in the left null space of [B1 : L1]. If the rank
  // is |I1| - 1 that is the whole null space and any row can go; otherwise
  // no single row restores full rank.
  const std::uint32_t drop = trace.b1.rows.front();
  std::vector<std::uint32_t> kept(trace.b1.rows.begin() + 1, trace.b1.rows.end());
  RowIndex rows(std::move(kept), a.nrows);
  try {
    trace.basis = build_basis(a, rows, trace.b1.columns, trace.l1_columns);
  } catch (const StageError& e) {
    throw StageError("even_k_adjust", "NoRemovableRow",
                     "no single row deletion restores full rank", e.diagnostics());
  }
  trace.even_k_row = drop;
  trace.basis_rows = std::move(rows);
}

BitVec phi_direct(const PipelineTrace& trace, std::span<const std::uint32_t> support) {
  BitVec phi(trace.R.size());
  for (std::size_t i = 0; i < trace.R.size(); ++i) {
    const BitVec& s = trace.row_supports[trace.R[i]];
    bool bit = false;
    for (std::uint32_t r : support) {
      bit ^= s.test(static_cast<std::size_t>(trace.basis_rows.pos[r]));
    }
    if (bit) phi.set(i);
  }
  return phi;
}

bool ScanResult::complete() const {
  return std::all_of(matches.begin(), matches.end(),
                     [](const auto& x) { return x.has_value(); });
}

ScanResult scan_candidates(const ColumnSupports& a, const PipelineTrace& trace,
                           std::span<const BitVec> targets,
                           const PipelineConfig& cfg) {
  const std::size_t K = trace.R.size();
  const AtomPartition& atoms = trace.partition.atoms;
  std::vector<std::uint32_t> want;
  for (const BitVec& t : targets) {
    if (t.size() != K) throw DimensionMismatch("target length differs from |R|");
    want.push_back(encode(t));
  }
  std::vector<std::uint32_t> d_col(trace.partition.D.cols());
  for (std::size_t c = 0; c < d_col.size(); ++c) d_col[c] = encode(trace.partition.D.column(c));

  ScanResult out;
  out.matches.assign(targets.size(), std::nullopt);
  std::size_t unmatched = targets.size();
  std::size_t j = trace.next_unviewed;
  for (; j < a.ncols() && out.in_support < cfg.omega && unmatched > 0; ++j) {
    const Support& supp = a.columns[j];
    ++out.scanned;
    if (!trace.basis_rows.covers(supp)) continue;
    ++out.in_support;
    bool candidate = true;
    for (std::uint32_t r : supp) {
      const auto p = static_cast<std::size_t>(trace.basis_rows.pos[r]);
      candidate = candidate && atoms.is_large(atoms.sigma_of_index[p]);
    }
    if (candidate) ++out.candidates;
    if (!candidate && cfg.candidates_only) continue;

    std::uint32_t phi = 0;
    if (candidate) {
      // c_R has the parity of c on each atom; phi = D c_R.
      for (std::uint32_t r : supp) {
        const auto p = static_cast<std::size_t>(trace.basis_rows.pos[r]);
        phi ^= d_col[sign_column(atoms.sigma_of_index[p], K)];
      }
      if (cfg.check_phi && phi != encode(phi_direct(trace, supp))) {
        throw Error("phi_R mismatch between D and B_inv on column " + std::to_string(j));
      }
    } else {
      phi = encode(phi_direct(trace, supp));
    }
    for (std::size_t t = 0; t < want.size(); ++t) {
      if (!out.matches[t] && want[t] == phi) {
        out.matches[t] = j;
        --unmatched;
        break;
      }
    }
  }
  out.next_unviewed = j;
  return out;
}

BinaryMatroid full_row_rank(const BinaryMatroid& m) {
  const EchelonResult e = echelon(m.rep());
  std::vector<std::size_t> rows(e.rank);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return BinaryMatroid(e.reduced.select_rows(rows), m.labels());
}

PipelineOutcome run_pipeline(const ColumnSupports& a,
                             const BinaryMatroid& target,
                             const PipelineConfig& config) {
  PipelineConfig cfg = config;
  cfg.validate();
  if (a.ncols() == 0) throw InvalidArgument("matrix has no columns");
  if (cfg.k == 0) cfg.k = a.columns[0].size();
  const BinaryMatroid reduced = full_row_rank(target);
  const std::size_t nu = reduced.rep().rows();
  if (nu > cfg.k) {
    throw InvalidArgument("target rank " + std::to_string(nu) + " exceeds k = " +
                          std::to_string(cfg.k));
  }
  if (nu > cfg.max_K) throw InvalidArgument("target rank exceeds max_K");

  PipelineOutcome outcome;
  PipelineTrace& trace = outcome.trace;
  trace.n = a.nrows;
  trace.m = a.ncols();
  trace.k = cfg.k;
  auto clock = std::chrono::steady_clock::now();
  auto lap = [&](const char* stage) {
    const auto now = std::chrono::steady_clock::now();
    trace.stage_seconds.emplace_back(stage, std::chrono::duration<double>(now - clock).count());
    clock = now;
  };

  try {
    trace.b1 = build_b1(a, cfg);
    lap("build_b1");

    const RowIndex i1(trace.b1.rows, a.nrows);
    const auto count = ceil_count(cfg.L * static_cast<double>(a.nrows));
    SupportScan support = collect_support_columns(a, i1, trace.b1.m1, count);
    trace.support_columns = std::move(support.columns);
    trace.next_unviewed = support.next_unviewed;
    lap("collect_support_columns");

    trace.support_threshold =
        std::max<std::size_t>(1, ceil_count(cfg.zeta * cfg.L * static_cast<double>(cfg.k)));
    Hypergraph h2(a.nrows, cfg.k);
    for (std::size_t j : trace.support_columns) h2.add_edge(a.columns[j]);
    const CoreResult core2 = d_core(h2, trace.support_threshold);
    if (core2.vertices.empty()) {
      throw StageError("support_core", "EmptyCore",
                       "the " + std::to_string(trace.support_threshold) + "-core is empty",
                       {{"threshold", trace.support_threshold}});
    }
    trace.I2.assign(core2.vertices.begin(), core2.vertices.end());
    for (std::size_t e : core2.edge_indices) trace.l1_columns.push_back(trace.support_columns[e]);
    lap("support_core");

    if (cfg.k % 2 == 0 && cfg.even_k_mode) {
      even_k_adjust(a, trace, cfg);
      lap("even_k_adjust");
    } else {
      trace.basis_rows = i1;
      trace.basis = build_basis(a, trace.basis_rows, trace.b1.columns, trace.l1_columns);
      lap("build_basis");
    }

    const std::size_t n2 = trace.basis_rows.size();
    const double dn2 = static_cast<double>(n2);
    trace.eps0 = cfg.eps0.value_or(
        std::max(0.5 * std::exp(-static_cast<double>(cfg.k)), 1.0 / dn2));
    std::vector<std::size_t> admitted;
    for (std::size_t i = 0; i < n2; ++i) {
      trace.row_supports.push_back(trace.basis.B_inv.row(i));
      const auto w = static_cast<double>(trace.row_supports.back().count());
      if (w < trace.eps0 * dn2) {
        ++trace.rows_too_light;
      } else if (w > dn2 - trace.eps0 * dn2) {
        ++trace.rows_too_heavy;
      } else {
        admitted.push_back(i);
      }
    }
    trace.rows_admitted = admitted.size();
    if (admitted.size() < nu) {
      throw StageError("row_weights", "NoAdmissibleRows",
                       std::to_string(admitted.size()) + " rows pass the weight gate",
                       {{"admitted", admitted.size()},
                        {"too_light", trace.rows_too_light},
                        {"too_heavy", trace.rows_too_heavy}});
    }
    lap("row_weights");

    if (nu > 0) {
      std::vector<BitVec> complements;
      double delta = 1.0;
      for (std::size_t i : admitted) {
        complements.push_back(trace.row_supports[i].complement());
        delta = std::min(delta, static_cast<double>(complements.back().count()) / dn2);
      }
      trace.selection = select_rows(complements, nu, cfg.delta.value_or(delta));
      for (std::size_t i : trace.selection.rows) trace.R.push_back(admitted[i]);
    }
    lap("select_rows");

    trace.eps1 = std::ldexp(trace.eps0, -2 * static_cast<int>(nu));
    trace.partition = build_partition(trace.row_supports, trace.R, trace.eps1, n2, cfg.max_K);
    lap("build_partition");

    const std::vector<BitVec> targets = reduced.rep().columns();
    for (const BitVec& t : targets) {
      trace.target_patterns.push_back(
          solve_target(trace.partition.D, trace.partition.atoms, t, nu));
    }
    lap("solve_target");

    const ScanResult scan = scan_candidates(a, trace, targets, cfg);
    trace.matches = scan.matches;
    trace.next_unviewed = scan.next_unviewed;
    trace.scanned = scan.scanned;
    trace.scanned_in_support = scan.in_support;
    trace.scanned_candidates = scan.candidates;
    lap("scan_candidates");
    if (!scan.complete()) {
      const auto matched = static_cast<std::size_t>(std::count_if(
          scan.matches.begin(), scan.matches.end(), [](const auto& x) { return x.has_value(); }));
      throw StageError("scan_candidates", "BudgetExhausted",
                       "matched " + std::to_string(matched) + " of " +
                           std::to_string(targets.size()) + " targets",
                       {{"matched", matched},
                        {"targets", targets.size()},
                        {"scanned", scan.scanned},
                        {"in_support", scan.in_support}});
    }

    MinorCertificate cert;
    std::vector<bool> in_R(n2, false);
    for (std::size_t i : trace.R) in_R[i] = true;
    std::vector<bool> used(a.ncols(), false);
    for (std::size_t p = 0; p < n2; ++p) {
      if (!in_R[p]) {
        cert.contract_set.push_back(trace.basis.columns[p]);
        used[trace.basis.columns[p]] = true;
      }
    }
    for (std::size_t t = 0; t < scan.matches.size(); ++t) {
      cert.kept.push_back(*scan.matches[t]);
      cert.column_map.push_back(t);
      used[*scan.matches[t]] = true;
    }
    for (std::size_t j = 0; j < a.ncols(); ++j) {
      if (!used[j]) cert.delete_set.push_back(j);
    }
    if (cfg.verify) {
      outcome.verified = verify_certificate(BinaryMatroid(a.to_dense()), cert, target);
      lap("verify");
    }
    outcome.certificate = std::move(cert);
  } catch (const StageError& e) {
    outcome.failure = StageFailure{e.stage(), e.code(), e.what(), e.diagnostics()};
  }
  return outcome;
}

PipelineOutcome run_pipeline(const ModelParams& params,
                             const BinaryMatroid& target, PipelineConfig cfg) {
  cfg.k = params.k;
  return run_pipeline(sample_columns(params), target, cfg);
}

nlohmann::json to_json(const MinorCertificate& cert) {
  return {{"contract", cert.contract_set},
          {"delete", cert.delete_set},
          {"kept", cert.kept},
          {"column_map", cert.column_map}};
}

MinorCertificate certificate_from_json(const nlohmann::json& j) {
  MinorCertificate cert;
  try {
    j.at("contract").get_to(cert.contract_set);
    j.at("delete").get_to(cert.delete_set);
    j.at("kept").get_to(cert.kept);
    j.at("column_map").get_to(cert.column_map);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad certificate: ") + e.what());
  }
  return cert;
}

nlohmann::json to_json(const PipelineOutcome& outcome) {
  const PipelineTrace& t = outcome.trace;
  nlohmann::json trace = {
      {"n", t.n},
      {"m", t.m},
      {"k", t.k},
      {"m1", t.b1.m1},
      {"b1_threshold", t.b1.threshold},
      {"n2", t.b1.rows.size()},
      {"m2", t.b1.columns.size()},
      {"b1_prediction",
       {{"subcritical", t.b1.prediction.subcritical},
        {"x", t.b1.prediction.x},
        {"vertex_fraction", t.b1.prediction.vertex_fraction},
        {"edge_fraction", t.b1.prediction.edge_fraction}}},
      {"support_columns", t.support_columns.size()},
      {"support_threshold", t.support_threshold},
      {"n3", t.I2.size()},
      {"m3", t.l1_columns.size()},
      {"basis_size", t.basis.columns.size()},
      {"basis_from_b1", t.basis.from_b1},
      {"eps0", t.eps0},
      {"rows_admitted", t.rows_admitted},
      {"rows_too_light", t.rows_too_light},
      {"rows_too_heavy", t.rows_too_heavy},
      {"R", t.R},
      {"selection",
       {{"s", t.selection.s},
        {"delta", t.selection.delta},
        {"delta_s", t.selection.delta_s},
        {"bound", t.selection.bound},
        {"intersection", t.selection.intersection}}},
      {"eps1", t.eps1},
      {"atom_sizes", t.partition.atoms.atom_sizes},
      {"next_unviewed", t.next_unviewed},
      {"scanned", t.scanned},
      {"scanned_in_support", t.scanned_in_support},
      {"scanned_candidates", t.scanned_candidates},
  };
  if (t.even_k_row) trace["even_k_row"] = *t.even_k_row;
  nlohmann::json d = nlohmann::json::array();
  for (std::size_t i = 0; i < t.partition.D.rows(); ++i) d.push_back(t.partition.D.row(i).to_string());
  trace["D"] = d;
  nlohmann::json patterns = nlohmann::json::array();
  for (const BitVec& v : t.target_patterns) patterns.push_back(v.to_string());
  trace["target_patterns"] = patterns;
  nlohmann::json matches = nlohmann::json::array();
  for (const auto& x : t.matches) matches.push_back(x ? nlohmann::json(*x) : nlohmann::json());
  trace["matches"] = matches;
  nlohmann::json seconds = nlohmann::json::object();
  for (const auto& [stage, s] : t.stage_seconds) seconds[stage] = s;

  nlohmann::json out = {{"success", outcome.success()}, {"trace", trace}, {"stage_seconds", seconds}};
  if (outcome.verified) out["verified"] = *outcome.verified;
  if (outcome.certificate) out["certificate"] = to_json(*outcome.certificate);
  if (outcome.failure) {
    out["failure"] = {{"stage", outcome.failure->stage},
                      {"code", outcome.failure->code},
                      {"message", outcome.failure->message},
                      {"diagnostics", outcome.failure->diagnostics}};
  }
  return out;
}

}  // namespace rbm
