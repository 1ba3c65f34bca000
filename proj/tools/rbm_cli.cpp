// rbm: command line front end for sampling, core peeling, the minor
// pipeline and Monte Carlo experiments.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rbm/column_supports.hpp"
#include "rbm/errors.hpp"
#include "rbm/harness.hpp"
#include "rbm/hypergraph.hpp"
#include "rbm/matroid.hpp"
#include "rbm/pipeline.hpp"
#include "rbm/sampler.hpp"

namespace {

using nlohmann::json;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw rbm::IOFailure("cannot open " + path);
  out << text;
  if (!out) throw rbm::IOFailure("failed writing " + path);
}

rbm::BinaryMatroid load_target(const std::string& spec) {
  for (const char* name : {"fano", "single", "pair", "triangle"}) {
    if (spec == name) return rbm::named_target(spec);
  }
  return rbm::load_matroid(spec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random binary matroid toolkit"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "Sample a k-sparse random matrix");
  std::size_t s_n = 0, s_m = 0, s_k = 0, s_min_row = 0;
  std::uint64_t s_seed = 0;
  std::string s_model = "uniform", s_out;
  sample->add_option("--n", s_n, "Rows")->required();
  sample->add_option("--m", s_m, "Columns")->required();
  sample->add_option("--k", s_k, "Ones per column")->required();
  sample->add_option("--seed", s_seed, "Seed");
  sample->add_option("--model", s_model, "uniform or degree-constrained")
      ->check(CLI::IsMember({"uniform", "degree-constrained"}));
  sample->add_option("--min-row", s_min_row, "Minimum row sum (degree-constrained)");
  sample->add_option("--out", s_out, "Output matrix file (stdout if omitted)");

  // core
  auto* core = app.add_subcommand("core", "Peel a hypergraph to its d-core or predict core sizes");
  std::string c_input, c_out;
  std::size_t c_k = 0, c_d = 0;
  double c_c = 0.0;
  bool c_predict = false;
  core->add_option("--input", c_input, "Matrix file whose columns are the edges");
  core->add_option("--k", c_k, "Edge size (default: size of the first column)");
  core->add_option("--d", c_d, "Core threshold")->required();
  core->add_flag("--predict", c_predict, "Only print the fixed-point prediction");
  core->add_option("--c", c_c, "Average degree for --predict");
  core->add_option("--out", c_out, "Output JSON file (stdout if omitted)");

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "Search for a target minor");
  std::size_t p_n = 0, p_m = 0, p_k = 0;
  std::uint64_t p_seed = 0;
  std::string p_target, p_out, p_input;
  rbm::PipelineConfig p_cfg;
  double p_eps0 = 0.0;
  pipe->add_option("--n", p_n, "Rows");
  pipe->add_option("--m", p_m, "Columns");
  pipe->add_option("--k", p_k, "Ones per column");
  pipe->add_option("--seed", p_seed, "Seed");
  pipe->add_option("--input", p_input, "Read the matrix instead of sampling it");
  pipe->add_option("--L", p_cfg.L, "Support-column multiplier");
  pipe->add_option("--zeta", p_cfg.zeta, "Core density of the support hypergraph");
  pipe->add_option("--m1-fraction", p_cfg.m1_fraction, "Columns used for B1, as a fraction of n");
  pipe->add_option("--omega", p_cfg.omega, "Candidate scan budget");
  pipe->add_option("--eps0", p_eps0, "Row-weight floor");
  pipe->add_flag("--even-k", p_cfg.even_k_mode, "Drop a redundant row when k is even");
  pipe->add_flag("--candidates-only", p_cfg.candidates_only, "Match candidate columns only");
  pipe->add_option("--target", p_target, "Target matroid file, or fano/single/pair/triangle")
      ->required();
  pipe->add_option("--out", p_out, "Output JSON file (stdout if omitted)");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  std::string e_kind, e_profile, e_out, e_format = "json";
  std::size_t e_trials = 0, e_threads = 0;
  std::uint64_t e_seed = 0;
  std::vector<std::string> e_params;
  exp->add_option("--profile", e_profile, "Named profile")->required();
  exp->add_option("--kind", e_kind, "Expected experiment kind");
  exp->add_option("--trials", e_trials, "Override the number of trials");
  auto* seed_opt = exp->add_option("--seed", e_seed, "Override the base seed");
  exp->add_option("--threads", e_threads, "Worker threads (0: all cores)");
  exp->add_option("--param", e_params, "Override a parameter: key=json-value");
  exp->add_option("--out", e_out, "Output file (stdout if omitted)");
  exp->add_option("--format", e_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* profiles = app.add_subcommand("profiles", "List the built-in experiment profiles");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample->parsed()) {
      rbm::ColumnSupports a;
      if (s_model == "uniform") {
        a = rbm::sample_columns({s_n, s_m, s_k, s_seed});
      } else {
        a = rbm::sample_degree_constrained_columns(s_n, s_m, s_k, s_min_row, s_seed);
      }
      std::ostringstream os;
      rbm::write_column_supports(os, a);
      write_text(s_out, os.str());
      if (!s_out.empty() && s_out != "-") {
        json side = {{"n", s_n}, {"m", s_m}, {"k", s_k}, {"seed", s_seed}, {"model", s_model}};
        if (s_model != "uniform") side["min_row"] = s_min_row;
        write_text(s_out + ".json", side.dump(2) + "\n");
      }
      return 0;
    }

    if (core->parsed()) {
      json out;
      if (c_predict) {
        if (c_k == 0 || c_c <= 0.0) throw rbm::InvalidArgument("--predict needs --k and --c");
        const rbm::CorePrediction p = rbm::core_prediction(c_c, c_k, c_d);
        out = {{"c", c_c}, {"k", c_k}, {"d", c_d}, {"subcritical", p.subcritical}, {"x", p.x},
               {"vertex_fraction", p.vertex_fraction}, {"edge_fraction", p.edge_fraction}};
      } else {
        if (c_input.empty()) throw rbm::InvalidArgument("--input is required unless --predict");
        const rbm::ColumnSupports a = rbm::load_column_supports(c_input);
        const std::size_t k = c_k != 0 ? c_k : (a.ncols() ? a.columns[0].size() : 0);
        const rbm::Hypergraph h = rbm::from_columns(a, {0, a.ncols()}, k);
        const rbm::CoreResult r = rbm::d_core(h, c_d);
        out = {{"n", a.nrows}, {"m", a.ncols()}, {"k", k}, {"d", c_d},
               {"num_vertices", r.vertices.size()}, {"num_edges", r.edge_indices.size()},
               {"vertices", r.vertices}, {"edge_indices", r.edge_indices}};
      }
      write_text(c_out, out.dump(2) + "\n");
      return 0;
    }

    if (pipe->parsed()) {
      if (p_eps0 > 0.0) p_cfg.eps0 = p_eps0;
      const rbm::BinaryMatroid target = load_target(p_target);
      rbm::PipelineOutcome outcome;
      if (!p_input.empty()) {
        outcome = rbm::run_pipeline(rbm::load_column_supports(p_input), target, p_cfg);
      } else {
        if (p_n == 0 || p_m == 0 || p_k == 0) {
          throw rbm::InvalidArgument("--n, --m and --k are required without --input");
        }
        outcome = rbm::run_pipeline(rbm::ModelParams{p_n, p_m, p_k, p_seed}, target, p_cfg);
      }
      write_text(p_out, rbm::to_json(outcome).dump(2) + "\n");
      return outcome.success() && outcome.verified.value_or(true) ? 0 : 1;
    }

    if (exp->parsed()) {
      rbm::ExperimentSpec spec = rbm::spec_from_profile(e_profile);
      if (!e_kind.empty() && rbm::parse_kind(e_kind) != spec.kind) {
        throw rbm::InvalidArgument("profile " + e_profile + " is a " + rbm::to_string(spec.kind) +
                                   " experiment");
      }
      if (e_trials > 0) spec.trials = e_trials;
      if (*seed_opt) spec.seed = e_seed;
      spec.threads = e_threads;
      for (const std::string& kv : e_params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw rbm::InvalidArgument("--param expects key=value");
        json value;
        try {
          value = json::parse(kv.substr(eq + 1));
        } catch (const json::exception&) {
          value = kv.substr(eq + 1);
        }
        spec.params[kv.substr(0, eq)] = value;
      }
      const rbm::ExperimentReport report = rbm::run_experiment(spec);
      write_text(e_out, rbm::emit_report(report, rbm::parse_format(e_format)));
      for (const rbm::Verdict& v : report.verdicts) {
        std::cerr << (v.passed ? "PASS " : "FAIL ") << v.name << ": " << v.detail << "\n";
      }
      return report.all_passed() ? 0 : 1;
    }

    if (profiles->parsed()) {
      for (const auto& [name, p] : rbm::builtin_profiles().items()) {
        std::cout << name << "\t" << p.at("kind").get<std::string>() << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
