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

#ifndef RBM_MATROID_HPP_
#define RBM_MATROID_HPP_

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rbm/gf2.hpp"

namespace rbm {

using Label = std::size_t;

// Column matroid of a GF(2) representation. Element i is column i of rep()
// and carries labels()[i]. Loops and parallel elements are kept as they are.
class BinaryMatroid {
 public:
  BinaryMatroid() = default;
  explicit BinaryMatroid(GF2Matrix rep);
  BinaryMatroid(GF2Matrix rep, std::vector<Label> labels);

  const GF2Matrix& rep() const { return rep_; }
  const std::vector<Label>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }

  bool has_label(Label l) const;
  // Throws UnknownLabel.
  std::size_t position(Label l) const;
  std::vector<std::size_t> positions(std::span<const Label> ls) const;

  std::size_t rank() const;
  std::size_t rank(std::span<const Label> subset) const;
  bool is_independent(std::span<const Label> subset) const;

 private:
  GF2Matrix rep_;
  std::vector<Label> labels_;
  std::unordered_map<Label, std::size_t> index_;
};

// Removes the elements of `s`.
BinaryMatroid delete_elements(const BinaryMatroid& m, std::span<const Label> s);

// Keeps exactly the elements of `kept`, in that order.
BinaryMatroid restrict_to(const BinaryMatroid& m, std::span<const Label> kept);

// M / s for an independent s: the columns of s are row-reduced to distinct
// unit vectors, then those pivot rows and the s columns are dropped.
// Throws DependentContractionSet.
BinaryMatroid contract(const BinaryMatroid& m, std::span<const Label> s);

// Equality of labelled matroids under positional correspondence: same size
// and the same rank on every subset of positions. Exhaustive; throws TooLarge
// above `max_elements`.
bool matroid_equal(const BinaryMatroid& a, const BinaryMatroid& b,
                   std::size_t max_elements = 20);

// Returns perm with element i of `a` corresponding to element perm[i] of `b`,
// such that every subset has the same rank under the correspondence.
// Exhaustive over bijections with signature pruning; throws TooLarge above
// `max_elements`.
std::optional<std::vector<std::size_t>> find_isomorphism(
    const BinaryMatroid& a, const BinaryMatroid& b,
    std::size_t max_elements = 12);

// Witness that a target is a minor: contract `contract_set`, delete
// `delete_set` and every other element outside `kept`; then kept[i] plays the
// role of target column column_map[i].
struct MinorCertificate {
  std::vector<Label> contract_set;
  std::vector<Label> delete_set;
  std::vector<Label> kept;
  std::vector<std::size_t> column_map;

  friend bool operator==(const MinorCertificate&,
                         const MinorCertificate&) = default;
};

struct BruteForceOptions {
  std::size_t max_elements = 14;
  std::size_t max_target = 8;
};

// Contract sets are tried by increasing size and then lexicographically by
// position; for each, kept sets are tried lexicographically and accepted when
// the resulting minor is isomorphic to `target`. Returns the first hit.
std::optional<MinorCertificate> has_minor_bruteforce(
    const BinaryMatroid& m, const BinaryMatroid& target,
    const BruteForceOptions& options = {});

// Rebuilds the minor described by `cert` and compares it with `target`.
// Throws UnknownLabel or DependentContractionSet; returns false for
// malformed certificates (overlapping sets, bad column_map).
bool verify_certificate(const BinaryMatroid& m, const MinorCertificate& cert,
                        const BinaryMatroid& target);

// The rank-3 binary matroid on all seven nonzero vectors of GF(2)^3.
BinaryMatroid fano_matroid();

// Matrix text format followed by an optional "labels: l0 l1 ..." line.
void write_matroid(std::ostream& os, const BinaryMatroid& m);
BinaryMatroid read_matroid(std::istream& is);
BinaryMatroid load_matroid(const std::string& path);

}  // namespace rbm

#endif  // RBM_MATROID_HPP_
