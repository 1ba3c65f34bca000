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

#include "rbm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "rbm/errors.hpp"
#include "rbm/hypergraph.hpp"
#include "rbm/rng.hpp"
#include "rbm/sampler.hpp"

namespace rbm {

extern const char* const kProfilesJson;

namespace {

using nlohmann::json;

const std::vector<std::pair<ExperimentKind, std::string>>& kind_names() {
  static const std::vector<std::pair<ExperimentKind, std::string>> names = {
      {ExperimentKind::kCoreSize, "core_size"},
      {ExperimentKind::kColumnIndependence, "column_independence"},
      {ExperimentKind::kSubsetSums, "subset_sums"},
      {ExperimentKind::kInverseRowWeights, "inverse_row_weights"},
      {ExperimentKind::kCandidateProbability, "candidate_probability"},
      {ExperimentKind::kMinorEndToEnd, "minor_end_to_end"},
  };
  return names;
}

std::size_t get_count(const json& p, const char* key) {
  if (!p.contains(key)) throw InvalidArgument(std::string("missing parameter ") + key);
  const json& v = p.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw InvalidArgument(std::string("parameter ") + key + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::size_t get_count(const json& p, const char* key, std::size_t fallback) {
  return p.contains(key) ? get_count(p, key) : fallback;
}

double get_real(const json& p, const char* key, double fallback) {
  if (!p.contains(key)) return fallback;
  if (!p.at(key).is_number()) throw InvalidArgument(std::string("parameter ") + key + " must be a number");
  return p.at(key).get<double>();
}

double log_choose(double n, double r) {
  return std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0);
}

double choose(std::size_t n, std::size_t r) {
  return std::round(std::exp(log_choose(static_cast<double>(n), static_cast<double>(r))));
}

// m columns: param "m", or "m_fraction" of n.
std::size_t column_count(const json& p, std::size_t n) {
  if (p.contains("m")) return get_count(p, "m");
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * get_real(p, "m_fraction", 0.25)));
}

BitVec alpha_vector(const json& p, std::size_t m) {
  const std::string name = p.value("alpha", std::string("zero"));
  BitVec alpha(m);
  if (name == "zero") return alpha;
  if (name == "e1") {
    if (m > 0) alpha.set(0);
    return alpha;
  }
  throw InvalidArgument("alpha must be \"zero\" or \"e1\"");
}

std::uint64_t trial_seed(const ExperimentSpec& spec, std::size_t t) {
  return derive_seed(spec.seed, t);
}

// ---- core_size ----

json core_size_trial(const json& p, std::uint64_t seed) {
  const std::size_t n = get_count(p, "n");
  const std::size_t k = get_count(p, "k");
  const std::size_t m = column_count(p, n);
  const std::size_t d = get_count(p, "d");
  const ColumnSupports a = sample_columns({n, m, k, seed});
  const CoreResult core = d_core(from_columns(a, ColumnRange{0, m}, k), d);
  return {{"vertices", core.vertices.size()},
          {"edges", core.edge_indices.size()},
          {"vertex_fraction", static_cast<double>(core.vertices.size()) / static_cast<double>(n)},
          {"edge_fraction", static_cast<double>(core.edge_indices.size()) / static_cast<double>(m)}};
}

void core_size_summary(const ExperimentSpec& spec, ExperimentReport& r) {
  const json& p = spec.params;
  const std::size_t n = get_count(p, "n");
  const std::size_t k = get_count(p, "k");
  const std::size_t m = column_count(p, n);
  const std::size_t d = get_count(p, "d");
  const double tol = get_real(p, "tolerance", 0.02);
  const double c = static_cast<double>(m * k) / static_cast<double>(n);
  const CorePrediction pred = core_prediction(c, k, d);
  const double pv = static_cast<double>(n) * pred.vertex_fraction;
  const double pe = static_cast<double>(m) * pred.edge_fraction;
  const std::string src = "greatest root x of c = x / Pr(Po(x) >= d-1)^(k-1)";
  r.predictions = {
      {"average_degree", {{"value", c}, {"source", "c = m k / n"}}},
      {"subcritical", {{"value", pred.subcritical}, {"source", src}}},
      {"x", {{"value", pred.x}, {"source", src}}},
      {"vertex_fraction", {{"value", pred.vertex_fraction}, {"source", "Pr(Po(x) >= d)"}}},
      {"edge_fraction", {{"value", pred.edge_fraction}, {"source", "(x / c)^(k / (k-1))"}}},
      {"vertices", {{"value", pv}, {"source", "n * vertex_fraction"}}},
      {"edges", {{"value", pe}, {"source", "m * edge_fraction"}}},
  };
  double worst_v = 0.0;
  double worst_e = 0.0;
  for (const json& rec : r.records) {
    if (rec.contains("error")) {
      worst_v = worst_e = std::numeric_limits<double>::infinity();
      continue;
    }
    worst_v = std::max(worst_v, relative_error(rec.at("vertices").get<double>(), pv));
    worst_e = std::max(worst_e, relative_error(rec.at("edges").get<double>(), pe));
  }
  auto detail = [&](double worst) {
    std::ostringstream os;
    os << "max relative error " << worst << ", tolerance " << tol;
    return os.str();
  };
  r.verdicts.push_back({"vertex_count_within_tolerance", worst_v <= tol, detail(worst_v)});
  r.verdicts.push_back({"edge_count_within_tolerance", worst_e <= tol, detail(worst_e)});
}

// ---- column_independence ----

json column_independence_trial(const json& p, std::uint64_t seed) {
  const std::size_t n = get_count(p, "n");
  const std::size_t k = get_count(p, "k");
  const auto m1 = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * get_real(p, "m1_fraction", 0.25)));
  const GF2Matrix x = sample_matrix({n, m1, k, seed});
  const std::size_t r = rank(x);
  return {{"m1", m1}, {"rank", r}, {"full_rank", r == m1}};
}

void column_independence_summary(const ExperimentSpec& spec, ExperimentReport& r) {
  std::size_t full = 0;
  for (const json& rec : r.records) full += rec.value("full_rank", false) ? 1 : 0;
  const std::size_t trials = r.records.size();
  const WilsonInterval w = wilson_interval(full, trials);
  r.aggregates["full_rank_wilson_95"] = {{"low", w.low}, {"high", w.high}};
  r.predictions = {{"full_rank_probability",
                    {{"value", 1.0}, {"source", "columns of X independent with high probability"}}}};
  const std::size_t need = spec.params.contains("min_successes")
                               ? get_count(spec.params, "min_successes")
                               : static_cast<std::size_t>(std::ceil(
                                     get_real(spec.params, "min_fraction", 0.9) *
                                         static_cast<double>(trials) - 1e-9));
  r.verdicts.push_back({"full_rank_trials", full >= need,
                        std::to_string(full) + " of " + std::to_string(trials) +
                            " trials full rank, need " + std::to_string(need)});
}

// ---- subset_sums ----

json subset_sums_trial(const json& p, std::uint64_t seed) {
  const std::size_t n = get_count(p, "n");
  const std::size_t m = get_count(p, "m");
  const std::size_t k = get_count(p, "k");
  const GF2Matrix a = sample_matrix({n, m, k, seed});
  const BitVec alpha = alpha_vector(p, m);
  const std::string mode = p.value("mode", std::string("exhaustive"));
  json rec;
  if (mode == "exhaustive") {
    if (n > 30) throw TooLarge("exhaustive subset sums limited to 30 rows");
    const SubsetSumCount c = count_subset_sums(a, alpha);
    rec["count"] = c.total;
    rec["per_size"] = c.per_size;
    return rec;
  }
  if (mode != "sampled") throw InvalidArgument("mode must be exhaustive or sampled");
  const auto s0 = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::ceil(static_cast<double>(n) * std::exp(-static_cast<double>(k)))));
  const std::size_t s_max = std::min(n, get_count(p, "max_size", s0));
  const std::size_t samples = get_count(p, "samples", 10000);
  Rng rng(derive_seed(seed, 1));
  std::vector<std::uint64_t> hits(s_max + 1, 0);
  std::vector<double> estimate(s_max + 1, 0.0);
  for (std::size_t s = 1; s <= s_max; ++s) {
    for (std::size_t t = 0; t < samples; ++t) {
      BitVec acc(m);
      for (std::uint32_t i : sample_k_subset(rng, n, s)) acc ^= a.row(i);
      if (acc == alpha) ++hits[s];
    }
    estimate[s] = choose(n, s) * static_cast<double>(hits[s]) / static_cast<double>(samples);
  }
  double total = 0.0;
  for (double e : estimate) total += e;
  rec["max_size"] = s_max;
  rec["samples"] = samples;
  rec["hits"] = hits;
  rec["estimate_per_size"] = estimate;
  rec["estimate"] = total;
  if (p.value("cross_validate", false)) {
    if (n > 24) throw TooLarge("cross-validation needs exhaustive enumeration (n <= 24)");
    rec["exact_per_size"] = count_subset_sums(a, alpha).per_size;
  }
  return rec;
}

void subset_sums_summary(const ExperimentSpec& spec, ExperimentReport& r) {
  const json& p = spec.params;
  const std::string mode = p.value("mode", std::string("exhaustive"));
  const std::size_t n = get_count(p, "n");
  bool ok = true;
  std::string detail;
  if (mode == "exhaustive") {
    std::size_t errors = 0;
    for (const json& rec : r.records) {
      if (rec.contains("error")) {
        ++errors;
        continue;
      }
      std::uint64_t sum = 0;
      for (const json& v : rec.at("per_size")) sum += v.get<std::uint64_t>();
      ok = ok && sum == rec.at("count").get<std::uint64_t>();
    }
    ok = ok && errors == 0;
    detail = "per-size counts add up to the totals in every trial";
    r.verdicts.push_back({"counts_consistent", ok, detail});
    return;
  }
  if (!p.value("cross_validate", false)) {
    std::size_t errors = 0;
    for (const json& rec : r.records) errors += rec.contains("error") ? 1 : 0;
    r.verdicts.push_back({"trials_completed", errors == 0,
                          std::to_string(errors) + " trials failed"});
    return;
  }
  // Pool hits over trials for every size and compare with the expectation
  // implied by the exact counts.
  const std::size_t samples = get_count(p, "samples", 10000);
  std::ostringstream os;
  std::size_t s_max = 0;
  for (const json& rec : r.records) {
    if (rec.contains("error")) {
      ok = false;
      continue;
    }
    s_max = std::max(s_max, rec.at("max_size").get<std::size_t>());
  }
  for (std::size_t s = 1; s <= s_max; ++s) {
    double hits = 0.0;
    double mean = 0.0;
    double var = 0.0;
    for (const json& rec : r.records) {
      if (rec.contains("error")) continue;
      const double prob = rec.at("exact_per_size").at(s).get<double>() / choose(n, s);
      hits += rec.at("hits").at(s).get<double>();
      mean += static_cast<double>(samples) * prob;
      var += static_cast<double>(samples) * prob * (1.0 - prob);
    }
    const double sd = std::sqrt(var);
    const bool pass = sd == 0.0 ? hits == mean : std::abs(hits - mean) <= 3.0 * sd;
    ok = ok && pass;
    os << "size " << s << ": hits " << hits << " expected " << mean << " sd " << sd << "; ";
  }
  r.verdicts.push_back({"sampled_matches_exhaustive", ok, os.str()});
}

// ---- inverse_row_weights ----

json inverse_row_weights_trial(const json& p, std::uint64_t seed) {
  const std::size_t n = get_count(p, "n");
  const std::size_t k = get_count(p, "k");
  const std::size_t m = get_count(p, "m");
  PipelineConfig cfg = pipeline_config_from_json(p);
  cfg.k = k;
  cfg.validate();
  const ColumnSupports a = sample_columns({n, m, k, seed});
  PipelineTrace trace;
  trace.n = n;
  trace.m = m;
  trace.k = k;
  json rec;
  try {
    trace.b1 = build_b1(a, cfg);
    const RowIndex i1(trace.b1.rows, n);
    const std::size_t count = static_cast<std::size_t>(std::ceil(cfg.L * static_cast<double>(n) - 1e-9));
    trace.support_columns = collect_support_columns(a, i1, trace.b1.m1, count).columns;
    Hypergraph h2(n, k);
    for (std::size_t j : trace.support_columns) h2.add_edge(a.columns[j]);
    const auto d2 = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(cfg.zeta * cfg.L * static_cast<double>(k) - 1e-9)));
    const CoreResult core2 = d_core(h2, d2);
    for (std::size_t e : core2.edge_indices) trace.l1_columns.push_back(trace.support_columns[e]);
    if (k % 2 == 0 && cfg.even_k_mode) {
      even_k_adjust(a, trace, cfg);
    } else {
      trace.basis_rows = i1;
      trace.basis = build_basis(a, i1, trace.b1.columns, trace.l1_columns);
    }
  } catch (const StageError& e) {
    rec["success"] = false;
    rec["stage"] = e.stage();
    rec["code"] = e.code();
    return rec;
  }
  const std::size_t n2 = trace.basis_rows.size();
  const double dn2 = static_cast<double>(n2);
  const double eps0 = cfg.eps0.value_or(std::max(0.5 * std::exp(-static_cast<double>(k)), 1.0 / dn2));
  std::vector<std::size_t> histogram(10, 0);
  std::size_t lo = n2;
  std::size_t hi = 0;
  std::size_t below = 0;
  std::size_t above = 0;
  double total = 0.0;
  for (std::size_t i = 0; i < n2; ++i) {
    const std::size_t w = trace.basis.B_inv.row(i).count();
    lo = std::min(lo, w);
    hi = std::max(hi, w);
    total += static_cast<double>(w);
    const double f = static_cast<double>(w) / dn2;
    ++histogram[std::min<std::size_t>(9, static_cast<std::size_t>(f * 10.0))];
    if (static_cast<double>(w) < eps0 * dn2) ++below;
    if (static_cast<double>(w) > dn2 - eps0 * dn2) ++above;
  }
  rec["success"] = true;
  rec["n2"] = n2;
  rec["eps0"] = eps0;
  rec["min_weight"] = lo;
  rec["max_weight"] = hi;
  rec["mean_weight_fraction"] = total / (dn2 * dn2);
  rec["rows_below_band"] = below;
  rec["rows_above_band"] = above;
  rec["histogram"] = histogram;
  return rec;
}

void inverse_row_weights_summary(const ExperimentSpec&, ExperimentReport& r) {
  std::size_t built = 0;
  std::size_t outside = 0;
  for (const json& rec : r.records) {
    if (!rec.value("success", false)) continue;
    ++built;
    outside += rec.at("rows_below_band").get<std::size_t>() +
               rec.at("rows_above_band").get<std::size_t>();
  }
  r.predictions = {{"rows_outside_band",
                    {{"value", 0},
                     {"source", "every row of B^-1 has between eps0 n2 and n2 - eps0 n2 ones"}}}};
  r.verdicts.push_back({"rows_within_band", built > 0 && outside == 0,
                        std::to_string(outside) + " rows outside the band over " +
                            std::to_string(built) + " trials that built B"});
}

// ---- candidate_probability ----

struct PlantedAtoms {
  std::size_t N = 0;
  std::vector<BitVec> supports;
  Partition partition;
  BitVec target;
};

PlantedAtoms planted_atoms(const json& p) {
  const std::size_t K = get_count(p, "K", 3);
  if (K < 1 || K > 8) throw InvalidArgument("K must lie in [1, 8]");
  const auto sizes = p.at("atom_sizes").get<std::vector<std::size_t>>();
  if (sizes.size() != (std::size_t{1} << K)) throw InvalidArgument("atom_sizes needs 2^K entries");
  PlantedAtoms out;
  for (std::size_t s : sizes) out.N += s;
  out.supports.assign(K, BitVec(out.N));
  std::size_t j = 0;
  for (std::uint32_t sigma = 0; sigma < sizes.size(); ++sigma) {
    for (std::size_t t = 0; t < sizes[sigma]; ++t, ++j) {
      for (std::size_t i = 0; i < K; ++i) {
        if ((sigma >> i) & 1U) out.supports[i].set(j);
      }
    }
  }
  std::vector<std::size_t> R(K);
  for (std::size_t i = 0; i < K; ++i) R[i] = i;
  const double eps1 = get_real(p, "eps1", 0.05);
  out.partition = build_partition(out.supports, R, eps1, out.N, K);
  out.target = BitVec::from_string(p.at("target").get<std::string>());
  if (out.target.size() != K) throw InvalidArgument("target needs K bits");
  return out;
}

json candidate_probability_trial(const json& p, std::uint64_t seed) {
  const PlantedAtoms planted = planted_atoms(p);
  const AtomPartition& atoms = planted.partition.atoms;
  const std::size_t K = atoms.K;
  const std::size_t k = get_count(p, "k");
  const std::size_t columns = get_count(p, "columns");
  std::uint32_t want = 0;
  for (std::size_t i = 0; i < K; ++i) {
    if (planted.target.test(i)) want |= std::uint32_t{1} << i;
  }
  std::vector<std::uint32_t> d_col(planted.partition.D.cols(), 0);
  for (std::size_t c = 0; c < d_col.size(); ++c) {
    for (std::size_t i = 0; i < K; ++i) {
      if (planted.partition.D.get(i, c)) d_col[c] |= std::uint32_t{1} << i;
    }
  }
  Rng rng(seed);
  std::size_t candidates = 0;
  std::size_t hits = 0;
  for (std::size_t t = 0; t < columns; ++t) {
    bool candidate = true;
    std::uint32_t phi = 0;
    for (std::uint32_t j : sample_k_subset(rng, planted.N, k)) {
      const std::uint32_t sigma = atoms.sigma_of_index[j];
      candidate = candidate && atoms.is_large(sigma);
      phi ^= d_col[sign_column(sigma, K)];
    }
    if (!candidate) continue;
    ++candidates;
    if (phi == want) ++hits;
  }
  const double rate = static_cast<double>(hits) / static_cast<double>(columns);
  return {{"columns", columns},
          {"candidates", candidates},
          {"hits", hits},
          {"rate", rate},
          {"sample_sd", std::sqrt(rate * (1.0 - rate) / static_cast<double>(columns))}};
}

void candidate_probability_summary(const ExperimentSpec& spec, ExperimentReport& r) {
  const json& p = spec.params;
  const PlantedAtoms planted = planted_atoms(p);
  const std::size_t k = get_count(p, "k");
  const double exact = exact_match_probability(planted.partition.atoms, planted.partition.D, k,
                                               planted.target);
  const double eps1 = get_real(p, "eps1", 0.05);
  const double bound = std::pow(eps1, static_cast<double>(k));
  const BitVec v = solve_target(planted.partition.D, planted.partition.atoms, planted.target, k);
  r.predictions = {
      {"exact_probability", {{"value", exact}, {"source", "multivariate hypergeometric over atom counts"}}},
      {"lower_bound", {{"value", bound}, {"source", "eps1^k"}}},
      {"target_pattern", {{"value", v.to_string()}, {"source", "minimum-weight v with D v = target"}}},
  };
  bool within = !r.records.empty();
  bool above = !r.records.empty();
  std::ostringstream os;
  for (const json& rec : r.records) {
    if (rec.contains("error")) {
      within = above = false;
      continue;
    }
    const double rate = rec.at("rate").get<double>();
    const double sd = rec.at("sample_sd").get<double>();
    within = within && std::abs(rate - exact) <= 3.0 * sd;
    above = above && rate >= bound;
    os << "rate " << rate << " (sd " << sd << "); ";
  }
  os << "exact " << exact << ", bound " << bound;
  r.verdicts.push_back({"rate_within_3_sd_of_exact", within, os.str()});
  r.verdicts.push_back({"rate_at_least_eps1_pow_k", above, os.str()});
}

// ---- minor_end_to_end ----

std::string target_name(const json& p, std::size_t t) {
  const json& target = p.at("target");
  if (target.is_array()) {
    if (target.empty()) throw InvalidArgument("target list is empty");
    return target.at(t % target.size()).get<std::string>();
  }
  return target.get<std::string>();
}

json minor_trial(const json& p, std::uint64_t seed, std::size_t t) {
  const std::size_t n = get_count(p, "n");
  const std::size_t m = get_count(p, "m");
  const std::size_t k = get_count(p, "k");
  const std::string name = target_name(p, t);
  const BinaryMatroid target = named_target(name);
  PipelineConfig cfg = pipeline_config_from_json(p);
  cfg.k = k;
  const ColumnSupports a = sample_columns({n, m, k, seed});
  json rec;
  rec["target"] = name;
  if (k % 2 == 0) {
    // Even k: every row sum of the full matrix vanishes.
    BitVec total(m);
    for (std::size_t j = 0; j < m; ++j) {
      if (a.columns[j].size() % 2 == 1) total.set(j);
    }
    rec["rows_sum_to_zero"] = total.none();
  }
  const PipelineOutcome out = run_pipeline(a, target, cfg);
  rec["success"] = out.success();
  if (out.verified) rec["verified"] = *out.verified;
  if (out.failure) {
    rec["stage"] = out.failure->stage;
    rec["code"] = out.failure->code;
  }
  rec["n2"] = out.trace.b1.rows.size();
  rec["scanned"] = out.trace.scanned;
  if (p.value("bruteforce", false)) {
    const BinaryMatroid whole(a.to_dense());
    BruteForceOptions options;
    options.max_elements = get_count(p, "bruteforce_max_elements", options.max_elements);
    const auto found = has_minor_bruteforce(whole, target, options);
    rec["bruteforce_found"] = found.has_value();
    if (found) rec["bruteforce_certificate_verifies"] = verify_certificate(whole, *found, target);
    rec["contradiction"] = out.success() && !found.has_value();
  }
  return rec;
}

void minor_summary(const ExperimentSpec& spec, ExperimentReport& r) {
  std::size_t successes = 0;
  std::size_t verified = 0;
  std::size_t contradictions = 0;
  std::size_t bf_found = 0;
  std::size_t bf_verified = 0;
  std::size_t parity_failures = 0;
  std::map<std::string, std::size_t> breakdown;
  for (const json& rec : r.records) {
    if (rec.contains("error")) {
      ++breakdown["error"];
      continue;
    }
    if (rec.value("success", false)) ++successes;
    if (rec.value("verified", false)) ++verified;
    if (rec.value("contradiction", false)) ++contradictions;
    if (rec.value("bruteforce_found", false)) ++bf_found;
    if (rec.value("bruteforce_certificate_verifies", false)) ++bf_verified;
    if (rec.contains("rows_sum_to_zero") && !rec.at("rows_sum_to_zero").get<bool>()) ++parity_failures;
    if (rec.contains("stage")) {
      ++breakdown[rec.at("stage").get<std::string>() + "/" + rec.at("code").get<std::string>()];
    }
  }
  r.aggregates["failure_breakdown"] = breakdown;
  const WilsonInterval w = wilson_interval(successes, r.records.size());
  r.aggregates["success_wilson_95"] = {{"low", w.low}, {"high", w.high}};
  r.predictions = {{"success_probability",
                    {{"value", 1.0}, {"source", "the random matroid contains the target as a minor with high probability"}}}};
  r.verdicts.push_back({"certificates_verify", verified == successes,
                        std::to_string(verified) + " of " + std::to_string(successes) +
                            " certificates verified"});
  if (spec.params.value("bruteforce", false)) {
    r.verdicts.push_back({"no_bruteforce_contradictions", contradictions == 0,
                          std::to_string(contradictions) + " contradictions over " +
                              std::to_string(r.records.size()) + " instances"});
    r.verdicts.push_back({"bruteforce_certificates_verify", bf_verified == bf_found,
                          std::to_string(bf_verified) + " of " + std::to_string(bf_found)});
  }
  if (spec.params.contains("min_successes")) {
    const std::size_t need = get_count(spec.params, "min_successes");
    r.verdicts.push_back({"min_successes", successes >= need,
                          std::to_string(successes) + " successes, need " + std::to_string(need)});
  }
  if (parity_failures > 0 || get_count(spec.params, "k") % 2 == 0) {
    r.verdicts.push_back({"even_k_rows_sum_to_zero", parity_failures == 0,
                          std::to_string(parity_failures) + " trials with a nonzero row sum"});
  }
  if (breakdown.contains("error")) {
    r.verdicts.push_back({"no_trial_errors", false,
                          std::to_string(breakdown["error"]) + " trials raised errors"});
  }
}

json run_trial(const ExperimentSpec& spec, std::size_t t) {
  const std::uint64_t seed = trial_seed(spec, t);
  json rec;
  try {
    switch (spec.kind) {
      case ExperimentKind::kCoreSize:
        rec = core_size_trial(spec.params, seed);
        break;
      case ExperimentKind::kColumnIndependence:
        rec = column_independence_trial(spec.params, seed);
        break;
      case ExperimentKind::kSubsetSums:
        rec = subset_sums_trial(spec.params, seed);
        break;
      case ExperimentKind::kInverseRowWeights:
        rec = inverse_row_weights_trial(spec.params, seed);
        break;
      case ExperimentKind::kCandidateProbability:
        rec = candidate_probability_trial(spec.params, seed);
        break;
      case ExperimentKind::kMinorEndToEnd:
        rec = minor_trial(spec.params, seed, t);
        break;
    }
  } catch (const std::exception& e) {
    rec = json::object();
    rec["error"] = e.what();
    rec["success"] = false;
  }
  rec["trial"] = t;
  rec["seed"] = seed;
  return rec;
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kind_names()) {
    if (k == kind) return name;
  }
  return "unknown";
}

ExperimentKind parse_kind(const std::string& name) {
  for (const auto& [k, n] : kind_names()) {
    if (n == name) return k;
  }
  throw InvalidArgument("unknown experiment kind: " + name);
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  if (!params.is_object()) throw InvalidArgument("params must be an object");
}

bool ExperimentReport::all_passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentReport report;
  report.spec = spec;
  std::vector<json> records(spec.trials);
  std::vector<double> seconds(spec.trials, 0.0);
  const auto start = std::chrono::steady_clock::now();
  parallel_for(spec.trials, spec.threads, [&](std::size_t t) {
    const auto t0 = std::chrono::steady_clock::now();
    records[t] = run_trial(spec, t);
    seconds[t] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });
  report.records = json(records);
  report.aggregates = aggregate_records(report.records);
  switch (spec.kind) {
    case ExperimentKind::kCoreSize:
      core_size_summary(spec, report);
      break;
    case ExperimentKind::kColumnIndependence:
      column_independence_summary(spec, report);
      break;
    case ExperimentKind::kSubsetSums:
      subset_sums_summary(spec, report);
      break;
    case ExperimentKind::kInverseRowWeights:
      inverse_row_weights_summary(spec, report);
      break;
    case ExperimentKind::kCandidateProbability:
      candidate_probability_summary(spec, report);
      break;
    case ExperimentKind::kMinorEndToEnd:
      minor_summary(spec, report);
      break;
  }
  report.timings = {
      {"trial_seconds", seconds},
      {"total_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
  return report;
}

json aggregate_records(const json& records) {
  std::map<std::string, std::vector<double>> values;
  for (const json& rec : records) {
    for (const auto& [key, v] : rec.items()) {
      if (key == "trial" || key == "seed") continue;
      if (v.is_boolean()) {
        values[key].push_back(v.get<bool>() ? 1.0 : 0.0);
      } else if (v.is_number()) {
        values[key].push_back(v.get<double>());
      }
    }
  }
  json out = json::object();
  for (const auto& [key, xs] : values) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    out[key] = {{"mean", mean},
                {"stddev", sd},
                {"min", *std::min_element(xs.begin(), xs.end())},
                {"max", *std::max_element(xs.begin(), xs.end())},
                {"count", xs.size()}};
  }
  return out;
}

ReportFormat parse_format(const std::string& name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  throw InvalidArgument("format must be json or csv");
}

json report_to_json(const ExperimentReport& report, bool include_timings) {
  json verdicts = json::array();
  for (const Verdict& v : report.verdicts) {
    verdicts.push_back({{"name", v.name}, {"passed", v.passed}, {"detail", v.detail}});
  }
  json out = {
      {"schema_version", ExperimentReport::kSchemaVersion},
      {"spec",
       {{"kind", to_string(report.spec.kind)},
        {"profile", report.spec.profile},
        {"params", report.spec.params},
        {"trials", report.spec.trials},
        {"seed", report.spec.seed}}},
      {"records", report.records},
      {"aggregates", report.aggregates},
      {"predictions", report.predictions},
      {"verdicts", verdicts},
      {"all_passed", report.all_passed()},
  };
  if (include_timings) out["timings"] = report.timings;
  return out;
}

ExperimentReport report_from_json(const json& j) {
  try {
    if (j.at("schema_version").get<int>() != ExperimentReport::kSchemaVersion) {
      throw ParseError("unsupported report schema version");
    }
    ExperimentReport r;
    const json& spec = j.at("spec");
    r.spec.kind = parse_kind(spec.at("kind").get<std::string>());
    r.spec.profile = spec.at("profile").get<std::string>();
    r.spec.params = spec.at("params");
    r.spec.trials = spec.at("trials").get<std::size_t>();
    r.spec.seed = spec.at("seed").get<std::uint64_t>();
    r.records = j.at("records");
    r.aggregates = j.at("aggregates");
    r.predictions = j.at("predictions");
    for (const json& v : j.at("verdicts")) {
      r.verdicts.push_back({v.at("name").get<std::string>(), v.at("passed").get<bool>(),
                            v.at("detail").get<std::string>()});
    }
    if (j.contains("timings")) r.timings = j.at("timings");
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad report: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("bad report: ") + e.what());
  }
}

std::string emit_report(const ExperimentReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) return report_to_json(report).dump(2) + "\n";
  std::set<std::string> keys;
  for (const json& rec : report.records) {
    for (const auto& [key, v] : rec.items()) keys.insert(key);
  }
  keys.erase("trial");
  std::ostringstream os;
  os << "trial";
  for (const std::string& key : keys) os << ',' << key;
  os << '\n';
  for (const json& rec : report.records) {
    os << rec.at("trial").dump();
    for (const std::string& key : keys) os << ',' << (rec.contains(key) ? csv_cell(rec.at(key)) : "");
    os << '\n';
  }
  os << "# kind," << to_string(report.spec.kind) << '\n';
  os << "# profile," << report.spec.profile << '\n';
  os << "# trials," << report.spec.trials << '\n';
  os << "# seed," << report.spec.seed << '\n';
  for (const auto& [key, v] : report.aggregates.items()) os << "# aggregate," << key << ',' << csv_cell(v) << '\n';
  for (const auto& [key, v] : report.predictions.items()) os << "# prediction," << key << ',' << csv_cell(v) << '\n';
  for (const Verdict& v : report.verdicts) {
    os << "# verdict," << v.name << ',' << (v.passed ? "pass" : "fail") << ',' << csv_cell(v.detail) << '\n';
  }
  return os.str();
}

void write_report(const std::string& path, const ExperimentReport& report,
                  ReportFormat format) {
  std::ofstream out(path);
  if (!out) throw IOFailure("cannot open " + path);
  out << emit_report(report, format);
  if (!out) throw IOFailure("failed writing " + path);
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double dn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / dn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / dn;
  const double center = (p + z2 / (2.0 * dn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / dn + z2 / (4.0 * dn * dn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double relative_error(double empirical, double predicted) {
  if (predicted == 0.0) {
    return empirical == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return std::abs(empirical - predicted) / std::abs(predicted);
}

SubsetSumCount count_subset_sums(const GF2Matrix& a, const BitVec& alpha) {
  const std::size_t n = a.rows();
  if (n > 62) throw TooLarge("subset enumeration limited to 62 rows");
  if (alpha.size() != a.cols()) throw DimensionMismatch("alpha length differs from column count");
  SubsetSumCount out;
  out.per_size.assign(n + 1, 0);
  BitVec acc(a.cols());
  std::size_t size = 0;
  std::uint64_t gray = 0;
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << n); ++i) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(i));
    acc ^= a.row(bit);
    gray ^= std::uint64_t{1} << bit;
    size = (gray >> bit) & 1U ? size + 1 : size - 1;
    if (size >= 1 && size < n && acc == alpha) {
      ++out.per_size[size];
      ++out.total;
    }
  }
  return out;
}

double exact_match_probability(const AtomPartition& atoms, const GF2Matrix& D,
                               std::size_t k, const BitVec& target) {
  const std::size_t K = atoms.K;
  std::size_t N = 0;
  for (std::size_t s : atoms.atom_sizes) N += s;
  std::vector<std::uint32_t> sigmas;
  for (std::uint32_t sigma = 0; sigma < atoms.atom_sizes.size(); ++sigma) {
    if (atoms.is_large(sigma) && atoms.atom_sizes[sigma] > 0) sigmas.push_back(sigma);
  }
  std::vector<std::uint32_t> col(sigmas.size(), 0);
  for (std::size_t t = 0; t < sigmas.size(); ++t) {
    for (std::size_t i = 0; i < K; ++i) {
      if (D.get(i, sign_column(sigmas[t], K))) col[t] |= std::uint32_t{1} << i;
    }
  }
  std::uint32_t want = 0;
  for (std::size_t i = 0; i < K; ++i) {
    if (target.test(i)) want |= std::uint32_t{1} << i;
  }
  const double log_total = log_choose(static_cast<double>(N), static_cast<double>(k));
  double prob = 0.0;
  // Distribute k ones over the large atoms.
  std::function<void(std::size_t, std::size_t, double, std::uint32_t)> walk =
      [&](std::size_t t, std::size_t left, double log_ways, std::uint32_t phi) {
        if (t == sigmas.size()) {
          if (left == 0 && phi == want) prob += std::exp(log_ways - log_total);
          return;
        }
        const std::size_t size = atoms.atom_sizes[sigmas[t]];
        for (std::size_t x = 0; x <= std::min(left, size); ++x) {
          walk(t + 1, left - x,
               log_ways + log_choose(static_cast<double>(size), static_cast<double>(x)),
               (x % 2 == 1) ? phi ^ col[t] : phi);
        }
      };
  walk(0, k, 0.0, 0);
  return prob;
}

BinaryMatroid named_target(const std::string& name) {
  if (name == "fano") return fano_matroid();
  if (name == "single") return BinaryMatroid(GF2Matrix::from_dense({{1}}));
  if (name == "pair") return BinaryMatroid(GF2Matrix::from_dense({{1, 0}, {0, 1}}));
  if (name == "triangle") return BinaryMatroid(GF2Matrix::from_dense({{1, 0, 1}, {0, 1, 1}}));
  if (name.rfind("file:", 0) == 0) return load_matroid(name.substr(5));
  throw InvalidArgument("unknown target: " + name);
}

PipelineConfig pipeline_config_from_json(const json& p) {
  PipelineConfig cfg;
  cfg.L = get_real(p, "L", cfg.L);
  cfg.zeta = get_real(p, "zeta", cfg.zeta);
  cfg.m1_fraction = get_real(p, "m1_fraction", cfg.m1_fraction);
  cfg.core_threshold_fraction = get_real(p, "core_threshold_fraction", cfg.core_threshold_fraction);
  if (p.contains("eps0")) cfg.eps0 = get_real(p, "eps0", 0.0);
  if (p.contains("delta")) cfg.delta = get_real(p, "delta", 0.0);
  cfg.omega = get_count(p, "omega", cfg.omega);
  cfg.even_k_mode = p.value("even_k", cfg.even_k_mode);
  cfg.candidates_only = p.value("candidates_only", cfg.candidates_only);
  cfg.verify = p.value("verify", cfg.verify);
  return cfg;
}

const json& builtin_profiles() {
  static const json profiles = json::parse(kProfilesJson);
  return profiles;
}

ExperimentSpec spec_from_profile(const std::string& name) {
  const json& all = builtin_profiles();
  if (!all.contains(name)) throw InvalidArgument("unknown profile: " + name);
  const json& p = all.at(name);
  ExperimentSpec spec;
  spec.kind = parse_kind(p.at("kind").get<std::string>());
  spec.profile = name;
  spec.params = p.value("params", json::object());
  spec.trials = p.value("trials", std::size_t{1});
  spec.seed = p.value("seed", std::uint64_t{0});
  return spec;
}

}  // namespace rbm
