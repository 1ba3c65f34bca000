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

#ifndef RBM_HARNESS_HPP_
#define RBM_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rbm/matroid.hpp"
#include "rbm/pipeline.hpp"

namespace rbm {

enum class ExperimentKind {
  kCoreSize,
  kColumnIndependence,
  kSubsetSums,
  kInverseRowWeights,
  kCandidateProbability,
  kMinorEndToEnd,
};

std::string to_string(ExperimentKind kind);
// Throws InvalidArgument for unknown names.
ExperimentKind parse_kind(const std::string& name);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kCoreSize;
  std::string profile;  // informational
  nlohmann::json params = nlohmann::json::object();
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0: hardware concurrency; never affects results

  // Throws InvalidArgument.
  void validate() const;
};

struct Verdict {
  std::string name;
  bool passed = false;
  std::string detail;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct ExperimentReport {
  static constexpr int kSchemaVersion = 1;

  ExperimentSpec spec;
  nlohmann::json records = nlohmann::json::array();      // one object per trial
  nlohmann::json aggregates = nlohmann::json::object();  // metric -> stats
  nlohmann::json predictions = nlohmann::json::object(); // name -> {value, source}
  std::vector<Verdict> verdicts;
  nlohmann::json timings = nlohmann::json::object();     // not part of results

  bool all_passed() const;
};

// Runs spec.trials independent trials; trial t uses seed
// derive_seed(spec.seed, t). Trial errors become failure records.
ExperimentReport run_experiment(const ExperimentSpec& spec);

// Mean, sample standard deviation, min, max and count of every numeric or
// boolean top-level field of the records.
nlohmann::json aggregate_records(const nlohmann::json& records);

enum class ReportFormat { kJson, kCsv };
ReportFormat parse_format(const std::string& name);

nlohmann::json report_to_json(const ExperimentReport& report,
                              bool include_timings = true);
// Throws ParseError on schema mismatch.
ExperimentReport report_from_json(const nlohmann::json& j);
std::string emit_report(const ExperimentReport& report, ReportFormat format);
// Throws IOFailure.
void write_report(const std::string& path, const ExperimentReport& report,
                  ReportFormat format);

struct WilsonInterval {
  double low = 0.0;
  double high = 0.0;
};
WilsonInterval wilson_interval(std::size_t successes, std::size_t n,
                               double z = 1.96);

// |empirical - predicted| / predicted, with 0/0 = 0 and x/0 = inf.
double relative_error(double empirical, double predicted);

// Exact count of rows subsets S with 1 <= |S| <= n - 1 whose row sum is
// alpha, by Gray-code enumeration. per_size[s] counts sets of size s.
struct SubsetSumCount {
  std::uint64_t total = 0;
  std::vector<std::uint64_t> per_size;
};
SubsetSumCount count_subset_sums(const GF2Matrix& a, const BitVec& alpha);

// Probability that a uniform k-subset of the index set is a candidate whose
// parity pattern D c_R equals `target`, by summing the multivariate
// hypergeometric law over per-atom counts.
double exact_match_probability(const AtomPartition& atoms, const GF2Matrix& D,
                               std::size_t k, const BitVec& target);

// Built-in named targets: fano, single, pair, triangle. A name of the form
// "file:<path>" loads a matroid file.
BinaryMatroid named_target(const std::string& name);

PipelineConfig pipeline_config_from_json(const nlohmann::json& params);

// Profiles shipped in config/profiles.json.
const nlohmann::json& builtin_profiles();
// Throws InvalidArgument for unknown names.
ExperimentSpec spec_from_profile(const std::string& name);

// Runs fn(i) for i in [0, count) on `threads` workers.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace rbm

#endif  // RBM_HARNESS_HPP_
