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

#ifndef RBM_PIPELINE_HPP_
#define RBM_PIPELINE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rbm/column_supports.hpp"
#include "rbm/errors.hpp"
#include "rbm/gf2.hpp"
#include "rbm/hypergraph.hpp"
#include "rbm/matroid.hpp"
#include "rbm/sampler.hpp"

namespace rbm {

// Failure of one pipeline stage. Stage functions throw it; run_pipeline turns
// it into a StageFailure value. `code` is one of EmptyCore,
// InsufficientColumns, RankDeficient, NoRemovableRow, NoAdmissibleRows,
// BoundUnmet, RankDeficientD, NoAdmissibleSolution, BudgetExhausted.
class StageError : public Error {
 public:
  StageError(std::string stage, std::string code, const std::string& message,
             nlohmann::json diagnostics = nlohmann::json::object())
      : Error(stage + ": " + code + ": " + message),
        stage_(std::move(stage)),
        code_(std::move(code)),
        diagnostics_(std::move(diagnostics)) {}

  const std::string& stage() const { return stage_; }
  const std::string& code() const { return code_; }
  const nlohmann::json& diagnostics() const { return diagnostics_; }

 private:
  std::string stage_;
  std::string code_;
  nlohmann::json diagnostics_;
};

struct PipelineConfig {
  std::size_t k = 0;  // 0: take it from the first column
  double L = 2.0;
  double zeta = 0.5;
  double m1_fraction = 0.25;
  double core_threshold_fraction = 0.1;
  // Row-weight floor. Default max(e^-k / 2, 1 / n2).
  std::optional<double> eps0;
  // Complement density handed to select_rows. Default: the smallest
  // complement density among admitted rows.
  std::optional<double> delta;
  std::size_t omega = 100000;  // in-support columns the final scan may view
  bool even_k_mode = false;
  // Match only candidate columns (no ones in small atoms). Otherwise every
  // in-support column is tried, candidates through D and the rest directly.
  bool candidates_only = false;
  bool check_phi = true;
  bool verify = true;
  std::size_t max_K = 16;

  // Throws InvalidArgument.
  void validate() const;
};

// Rows of a set of row indices, plus the position of every row in it.
struct RowIndex {
  std::vector<std::uint32_t> rows;  // sorted
  std::vector<std::int32_t> pos;    // pos[row] or -1

  RowIndex() = default;
  RowIndex(std::vector<std::uint32_t> rows, std::size_t n);
  std::size_t size() const { return rows.size(); }
  bool contains(std::uint32_t row) const { return pos[row] >= 0; }
  // True iff every entry of `support` is in the set.
  bool covers(std::span<const std::uint32_t> support) const;
};

struct B1Result {
  std::size_t m1 = 0;
  std::size_t threshold = 0;
  std::vector<std::uint32_t> rows;    // I1
  std::vector<std::size_t> columns;   // surviving columns among the first m1
  CorePrediction prediction;          // for c = m1 k / n, d = threshold
};

// Peels the hypergraph of the first floor(n m1_fraction) columns to its
// ceil(core_threshold_fraction k)-core. Throws StageError EmptyCore.
B1Result build_b1(const ColumnSupports& a, const PipelineConfig& cfg);

struct SupportScan {
  std::vector<std::size_t> columns;
  std::size_t next_unviewed = 0;  // high-water mark after the scan
};

// First `count` columns at or after `first` whose support lies in `rows`.
// Throws StageError InsufficientColumns.
SupportScan collect_support_columns(const ColumnSupports& a,
                                    const RowIndex& rows, std::size_t first,
                                    std::size_t count);

struct Basis {
  std::vector<std::size_t> columns;  // B1 columns first
  std::size_t from_b1 = 0;
  GF2Matrix B;
  GF2Matrix B_inv;
};

// Greedy basis over the columns restricted to `rows`, `b1` first then `l1`,
// until it has |rows| elements. Throws StageError RankDeficient.
Basis build_basis(const ColumnSupports& a, const RowIndex& rows,
                  std::span<const std::size_t> b1,
                  std::span<const std::size_t> l1);

struct RowSelection {
  std::vector<std::size_t> rows;  // indices into the complement list
  std::size_t s = 0;              // ceil(log2 r)
  double delta = 0.0;
  double delta_s = 0.0;
  double bound = 0.0;             // delta_s n / (2r)
  std::size_t intersection = 0;   // |intersection of the chosen complements|
};

// Picks r of the sets X_i (all of length n) with a large common
// intersection by the pairing construction: level-0 groups are single sets,
// and a level-(j+1) group joins two disjoint level-j groups whose
// intersections meet in at least delta_{j+1} n elements, where
// delta_0 = delta and delta_{j+1} = delta_j^2 / 4. Sets are visited in
// decreasing size. Returns the first r members of a level-ceil(log2 r) group.
// Throws InvalidArgument if some |X_i| < delta n and StageError BoundUnmet if
// the construction does not reach the bound.
RowSelection select_rows(std::span<const BitVec> complements, std::size_t r,
                         double delta);

// Atoms of the Boolean algebra generated by K row supports. sigma has bit i
// set iff the index lies in the support of the i-th selected row.
struct AtomPartition {
  std::size_t K = 0;
  std::vector<std::uint32_t> sigma_of_index;
  std::vector<std::size_t> atom_sizes;  // indexed by sigma, 2^K entries
  double large_threshold = 0.0;

  bool is_large(std::uint32_t sigma) const {
    return static_cast<double>(atom_sizes[sigma]) >= large_threshold;
  }
};

// Column c of the sign matrix D belongs to sigma = 2^K - 1 - c, so K = 1
// gives the column order (sigma = 1, sigma = 0).
std::size_t sign_column(std::uint32_t sigma, std::size_t K);
std::uint32_t sign_sigma(std::size_t column, std::size_t K);

struct Partition {
  AtomPartition atoms;
  GF2Matrix D;  // K x 2^K
};

// D(i, sigma) = 1 iff bit i of sigma is set and the atom is large
// (size >= eps1 n). Throws InvalidArgument if K > max_K and StageError
// RankDeficientD if rank(D) < K.
Partition build_partition(std::span<const BitVec> row_supports,
                          std::span<const std::size_t> R, double eps1,
                          std::size_t n, std::size_t max_K = 16);

// Minimum-weight v supported on large atoms with D v = target, ties broken
// by the lexicographically first support. Throws StageError
// NoAdmissibleSolution if every solution has weight > nu.
BitVec solve_target(const GF2Matrix& D, const AtomPartition& atoms,
                    const BitVec& target, std::size_t nu);

struct PipelineTrace {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  B1Result b1;
  std::vector<std::size_t> support_columns;  // L
  std::size_t support_threshold = 0;         // d2
  std::vector<std::uint32_t> I2;
  std::vector<std::size_t> l1_columns;       // L1
  std::optional<std::uint32_t> even_k_row;   // removed row in even-k mode
  RowIndex basis_rows;                       // I1, minus the removed row
  Basis basis;
  std::vector<BitVec> row_supports;          // S_i, rows of B_inv
  double eps0 = 0.0;
  std::size_t rows_admitted = 0;
  std::size_t rows_too_light = 0;
  std::size_t rows_too_heavy = 0;
  RowSelection selection;
  std::vector<std::size_t> R;                // rows of B_inv
  double eps1 = 0.0;
  Partition partition;
  std::vector<BitVec> target_patterns;       // v_j
  std::vector<std::optional<std::size_t>> matches;
  std::size_t next_unviewed = 0;
  std::size_t scanned = 0;
  std::size_t scanned_in_support = 0;
  std::size_t scanned_candidates = 0;
  std::vector<std::pair<std::string, double>> stage_seconds;
};

// k odd: no-op. k even: the rows of [B1 : L1] sum to zero, so one row of I1
// is dropped and the basis is rebuilt on the rest; every later stage works
// on the reduced row set and candidate columns must avoid the dropped row.
// Throws StageError NoRemovableRow when no single row restores full rank.
void even_k_adjust(const ColumnSupports& a, PipelineTrace& trace,
                   const PipelineConfig& cfg);

// phi_R(B_inv c): bit i is the parity of |S_{R_i} & support(c)|.
BitVec phi_direct(const PipelineTrace& trace, std::span<const std::uint32_t> support);

struct ScanResult {
  std::vector<std::optional<std::size_t>> matches;
  std::size_t scanned = 0;
  std::size_t in_support = 0;
  std::size_t candidates = 0;
  std::size_t next_unviewed = 0;

  bool complete() const;
};

// Views columns from trace.next_unviewed on until omega of them have their
// support inside the basis rows, assigning each to the first unmatched
// target equal to phi_R(B_inv c). Partial results are returned as they are.
ScanResult scan_candidates(const ColumnSupports& a, const PipelineTrace& trace,
                           std::span<const BitVec> targets,
                           const PipelineConfig& cfg);

struct StageFailure {
  std::string stage;
  std::string code;
  std::string message;
  nlohmann::json diagnostics;
};

struct PipelineOutcome {
  PipelineTrace trace;
  std::optional<MinorCertificate> certificate;
  std::optional<StageFailure> failure;
  std::optional<bool> verified;  // set when a certificate was checked

  bool success() const { return certificate.has_value(); }
};

// Runs every stage on `a` (labels are column indices). The target is first
// reduced to a full-row-rank representation. Invalid arguments throw; stage
// failures are returned.
PipelineOutcome run_pipeline(const ColumnSupports& a,
                             const BinaryMatroid& target,
                             const PipelineConfig& cfg);
PipelineOutcome run_pipeline(const ModelParams& params,
                             const BinaryMatroid& target, PipelineConfig cfg);

// Full row rank representation of the same matroid.
BinaryMatroid full_row_rank(const BinaryMatroid& m);

nlohmann::json to_json(const MinorCertificate& cert);
MinorCertificate certificate_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PipelineOutcome& outcome);

}  // namespace rbm

#endif  // RBM_PIPELINE_HPP_
