#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "isanneal/bounds.hpp"
#include "isanneal/dynamics.hpp"
#include "isanneal/errors.hpp"
#include "isanneal/experiments.hpp"
#include "isanneal/graph.hpp"
#include "isanneal/median.hpp"
#include "isanneal/rng.hpp"
#include "isanneal/schedule.hpp"

namespace py = pybind11;
using namespace isanneal;

namespace {

py::dict size_dict(const SizeDistribution& d) {
  py::dict out;
  for (const auto& [k, v] : d.by_size) out[py::int_(k)] = py::make_tuple(v.unconditioned, v.conditioned);
  return out;
}

ExperimentConfig make_config(const std::string& kind, const py::kwargs& kw) {
  ExperimentConfig cfg = kind == "fig3" ? ExperimentConfig::fig3_defaults() : ExperimentConfig::fig4_defaults();
  if (kind != "fig3" && kind != "fig4") throw DomainError("experiment must be 'fig3' or 'fig4'");
  for (const auto& [key, value] : kw) {
    const auto k = key.cast<std::string>();
    if (k == "n_list") cfg.n_list = value.cast<std::vector<int>>();
    else if (k == "p") cfg.p = value.cast<double>();
    else if (k == "samples") cfg.samples = value.cast<int>();
    else if (k == "T") cfg.t_rule = PowerRule::parse(py::str(value));
    else if (k == "omega0") cfg.omega0_rule = PowerRule::parse(py::str(value));
    else if (k == "schedule") cfg.schedule = value.cast<std::string>();
    else if (k == "master_seed") cfg.master_seed = value.cast<std::uint64_t>();
    else if (k == "tolerance") cfg.tolerance = value.cast<double>();
    else if (k == "s_end") cfg.s_end = value.cast<double>();
    else if (k == "full_space_max") cfg.full_space_max = value.cast<int>();
    else if (k == "kappa") cfg.kappa = value.cast<double>();
    else if (k == "density_c") cfg.density_c = value.cast<double>();
    else if (k == "workers") cfg.workers = value.cast<unsigned>();
    else throw DomainError("unknown experiment option: " + k);
  }
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rydberg-blockade annealing of independent sets";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Graph>(m, "Graph")
      .def(py::init<int, const std::vector<Edge>&>(), py::arg("n"), py::arg("edges"))
      .def_property_readonly("n", &Graph::num_vertices)
      .def_property_readonly("edges", &Graph::edges)
      .def("num_edges", &Graph::num_edges)
      .def("has_edge", &Graph::has_edge)
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
      .def("__repr__", [](const Graph& g) {
        return "Graph(n=" + std::to_string(g.num_vertices()) + ", m=" + std::to_string(g.num_edges()) + ")";
      });

  m.def("erdos_renyi", &erdos_renyi, py::arg("n"), py::arg("p"), py::arg("seed"));
  m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("n"), py::arg("k"));
  m.def("read_graph", &read_graph_file, py::arg("path"));
  m.def("is_independent", [](const Graph& g, Mask s) { return is_independent(g, VertexSet(s)); });
  m.def("greedy_mis", [](const Graph& g) { return greedy_mis(g).vertices(); });
  m.def("exact_mis", [](const Graph& g) { return exact_mis(g).vertices(); });
  m.def("independent_sets", [](const Graph& g) {
    std::vector<Mask> out;
    for (VertexSet s : enumerate_independent_sets(g)) out.push_back(s.mask);
    return out;
  }, "Independent sets as ascending bitmasks.");

  m.def("median_graph", [](const Graph& g) {
    const MedianGraph mg = MedianGraph::build(g);
    std::vector<Mask> nodes;
    for (VertexSet s : mg.nodes()) nodes.push_back(s.mask);
    return py::make_tuple(nodes, mg.edge_list());
  }, py::arg("graph"), "(node masks, index pairs) of the independent-set lattice.");

  m.def(
      "evolve",
      [](const Graph& g, double t_total, double omega0, const std::string& schedule, double s_end, double tol) {
        const auto r = evolve_full(g, AnnealParams{t_total, omega0, builtin_schedule(schedule)}, s_end,
                                   EvolveOptions{.tol = tol});
        py::dict out;
        out["state"] = r.final_state;
        out["p_is"] = r.p_is;
        out["leakage"] = r.leakage;
        out["expected_is_size"] = expected_is_size(r.final_state, g);
        out["sizes"] = size_dict(r.sizes);
        out["norm_drift"] = r.norm_drift;
        out["steps"] = r.steps_taken;
        return out;
      },
      py::arg("graph"), py::arg("T"), py::arg("omega0"), py::arg("schedule") = "fig4", py::arg("s_end") = 1.0,
      py::arg("tol") = 1e-6);

  m.def(
      "walk",
      [](const Graph& g, double omega, double delta, double t_total, double s_end) {
        const WalkResult w = walk_evolve(MedianGraph::build(g), omega, delta, t_total, s_end);
        py::dict out;
        out["state"] = w.state;
        out["p2"] = w.p2;
        out["size_probs"] = w.size_probs;
        out["norm_drift"] = w.norm_drift;
        return out;
      },
      py::arg("graph"), py::arg("omega"), py::arg("delta"), py::arg("T"), py::arg("s_end"));

  m.def("p2_short_time", &p2_short_time, py::arg("n"), py::arg("m"), py::arg("omega"), py::arg("T"), py::arg("s"));
  m.def(
      "p2_oracle",
      [](const Graph& g, double omega, double t_total, double s) {
        return p2_perturbative_oracle(MedianGraph::build(g), omega, t_total, s);
      },
      py::arg("graph"), py::arg("omega"), py::arg("T"), py::arg("s"));

  m.def(
      "leakage_bound",
      [](const std::string& schedule, double t_total, double omega0, int n) {
        const auto r = bounds::leakage_upper_bound(bounds::derive_constants(builtin_schedule(schedule), t_total, omega0, n));
        py::dict out;
        out["leading"] = r.leading_term;
        out["second"] = r.second_term;
        out["bound"] = r.truncated_bound;
        out["tail"] = r.tail_estimate;
        out["convergence_ok"] = r.convergence_ok;
        out["certified"] = r.certified;
        out["annotations"] = r.annotations;
        return out;
      },
      py::arg("schedule"), py::arg("T"), py::arg("omega0"), py::arg("n"));

  m.def(
      "run_experiment",
      [](const std::string& kind, const py::kwargs& kw) {
        const ExperimentConfig cfg = make_config(kind, kw);
        ExperimentResult r;
        {
          py::gil_scoped_release release;
          r = kind == "fig3" ? run_fig3(cfg) : run_fig4(cfg);
        }
        std::ostringstream out;
        write_csv(out, r);
        return out.str();
      },
      py::arg("kind"), "Runs an experiment and returns its CSV text. Keyword names follow the CLI flags.");

  m.def(
      "single_json",
      [](const Graph& g, double t_total, double omega0, const std::string& schedule) {
        SingleRunConfig cfg;
        cfg.t_total = t_total;
        cfg.omega0 = omega0;
        cfg.schedule = schedule;
        return run_single_json(g, cfg);
      },
      py::arg("graph"), py::arg("T") = 100.0, py::arg("omega0") = 0.0, py::arg("schedule") = "fig4");
}
