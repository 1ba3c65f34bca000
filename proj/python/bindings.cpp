// Python bindings. Structured results cross the boundary as JSON text and
// are decoded by the pure-Python wrapper in rbm/__init__.py.

#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rbm/errors.hpp"
#include "rbm/gf2.hpp"
#include "rbm/harness.hpp"
#include "rbm/hypergraph.hpp"
#include "rbm/matroid.hpp"
#include "rbm/pipeline.hpp"
#include "rbm/sampler.hpp"

namespace py = pybind11;

namespace {

using Dense = std::vector<std::vector<int>>;

rbm::GF2Matrix from_dense(const Dense& d) {
  const std::size_t cols = d.empty() ? 0 : d[0].size();
  rbm::GF2Matrix m(d.size(), cols);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i].size() != cols) throw rbm::DimensionMismatch("ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, d[i][j] & 1);
  }
  return m;
}

Dense to_dense(const rbm::GF2Matrix& m) {
  Dense d(m.rows(), std::vector<int>(m.cols(), 0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) d[i][j] = m.get(i, j) ? 1 : 0;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_rbm, m) {
  m.doc() = "Random binary matroid minors: sampling, cores, GF(2) algebra and the minor pipeline";

  static py::exception<rbm::Error> error(m, "RbmError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const rbm::Error& e) {
      error(e.what());
    }
  });

  m.def(
      "sample",
      [](std::size_t n, std::size_t mcols, std::size_t k, std::uint64_t seed) {
        return rbm::sample_columns({n, mcols, k, seed}).columns;
      },
      py::arg("n"), py::arg("m"), py::arg("k"), py::arg("seed") = 0,
      "Column supports of a random n x m matrix with k ones per column.");

  m.def(
      "rank", [](const Dense& d) { return rbm::rank(from_dense(d)); }, py::arg("rows"));
  m.def(
      "invert", [](const Dense& d) { return to_dense(rbm::invert(from_dense(d))); },
      py::arg("rows"));

  m.def(
      "d_core",
      [](std::size_t n, const std::vector<std::vector<rbm::Vertex>>& edges, std::size_t d) {
        const std::size_t k = edges.empty() ? 1 : edges[0].size();
        rbm::Hypergraph h(n, k);
        for (const auto& e : edges) h.add_edge(e);
        const rbm::CoreResult c = rbm::d_core(h, d);
        return py::make_tuple(c.vertices, c.edge_indices);
      },
      py::arg("n"), py::arg("edges"), py::arg("d"),
      "Returns (vertices, edge indices) of the d-core.");

  m.def(
      "core_prediction",
      [](double c, std::size_t k, std::size_t d) {
        const rbm::CorePrediction p = rbm::core_prediction(c, k, d);
        py::dict out;
        out["subcritical"] = p.subcritical;
        out["x"] = p.x;
        out["vertex_fraction"] = p.vertex_fraction;
        out["edge_fraction"] = p.edge_fraction;
        return out;
      },
      py::arg("c"), py::arg("k"), py::arg("d"));

  m.def("fano", []() { return to_dense(rbm::fano_matroid().rep()); });

  m.def(
      "_run_pipeline",
      [](std::size_t n, std::size_t mcols, std::size_t k, std::uint64_t seed,
         const std::string& target, const std::string& config_json) {
        const rbm::PipelineConfig cfg =
            rbm::pipeline_config_from_json(nlohmann::json::parse(config_json));
        rbm::PipelineOutcome out;
        {
          py::gil_scoped_release release;
          out = rbm::run_pipeline(rbm::ModelParams{n, mcols, k, seed}, rbm::named_target(target), cfg);
        }
        return rbm::to_json(out).dump();
      },
      py::arg("n"), py::arg("m"), py::arg("k"), py::arg("seed"), py::arg("target"),
      py::arg("config_json"));

  m.def(
      "_run_experiment",
      [](const std::string& profile, std::optional<std::size_t> trials,
         std::optional<std::uint64_t> seed, std::size_t threads) {
        rbm::ExperimentSpec spec = rbm::spec_from_profile(profile);
        if (trials) spec.trials = *trials;
        if (seed) spec.seed = *seed;
        spec.threads = threads;
        rbm::ExperimentReport report;
        {
          py::gil_scoped_release release;
          report = rbm::run_experiment(spec);
        }
        return rbm::emit_report(report, rbm::ReportFormat::kJson);
      },
      py::arg("profile"), py::arg("trials") = py::none(), py::arg("seed") = py::none(),
      py::arg("threads") = 0);

  m.def("profiles", []() {
    std::vector<std::string> names;
    for (const auto& [name, value] : rbm::builtin_profiles().items()) names.push_back(name);
    return names;
  });
}
