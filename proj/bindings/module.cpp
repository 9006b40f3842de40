#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "graphfactor/general_graph.hpp"
#include "graphfactor/generators.hpp"
#include "graphfactor/json_io.hpp"
#include "graphfactor/pipeline.hpp"
#include "graphfactor/rounding.hpp"
#include "graphfactor/verification.hpp"

namespace py = pybind11;
using namespace graphfactor;

namespace {

// Graphs are immutable after construction; python holds them non-const.
using PyGraph = std::shared_ptr<BipartiteMultigraph>;

PyGraph unconst(GraphPtr g) { return std::const_pointer_cast<BipartiteMultigraph>(std::move(g)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "k-factors of regular bipartite graphs via exact fractional rounding";

    py::register_exception<StructuralError>(m, "StructuralError");
    py::register_exception<InvariantViolation>(m, "InvariantViolation");
    py::register_exception<UnsupportedParameters>(m, "UnsupportedParameters");
    py::register_exception<RefusalError>(m, "RefusalError");

    py::class_<BipartiteMultigraph, PyGraph>(m, "BipartiteMultigraph")
        .def("vertex_count", &BipartiteMultigraph::vertex_count)
        .def("edge_count", &BipartiteMultigraph::edge_count)
        .def("degree", &BipartiteMultigraph::degree)
        .def("is_regular", &BipartiteMultigraph::is_regular)
        .def("to_json", [](const BipartiteMultigraph& g) { return graph_to_json(g).dump(); });

    py::class_<FractionalMatching>(m, "FractionalMatching")
        .def("denominator", &FractionalMatching::denominator)
        .def("target", &FractionalMatching::target)
        .def("weight_num", &FractionalMatching::weight_num)
        .def("is_fractional_k_matching", &FractionalMatching::is_fractional_k_matching)
        .def("to_json", [](const FractionalMatching& f) { return matching_to_json(f).dump(); });

    py::class_<OracleGraph>(m, "OracleGraph")
        .def_readonly("dim", &OracleGraph::dim)
        .def_readonly("shifts", &OracleGraph::shifts)
        .def("degree", &OracleGraph::degree);

    py::class_<Window>(m, "Window")
        .def_readonly("center", &Window::center)
        .def_readonly("radius", &Window::radius)
        .def_property_readonly("graph", [](const Window& w) { return unconst(w.graph); })
        .def("to_json", [](const Window& w) { return window_to_json(w).dump(); });

    py::class_<FactorSubgraph>(m, "FactorSubgraph")
        .def_readonly("edge_ids", &FactorSubgraph::edge_ids)
        .def_readonly("k", &FactorSubgraph::k);

    py::class_<LemmaMainResult>(m, "LemmaMainResult")
        .def_readonly("unresolved", &LemmaMainResult::unresolved)
        .def_property_readonly("matching", [](const LemmaMainResult& r) { return r.g; });

    py::class_<WindowFactorResult>(m, "WindowFactorResult")
        .def_readonly("unresolved", &WindowFactorResult::unresolved)
        .def_readonly("factor", &WindowFactorResult::factor);

    py::class_<ResidualReport>(m, "ResidualReport")
        .def_readonly("radius", &ResidualReport::radius)
        .def_readonly("interior", &ResidualReport::interior)
        .def_readonly("unresolved", &ResidualReport::unresolved)
        .def_property_readonly("residual", [](const ResidualReport& r) {
            return py::make_tuple(r.residual.num, r.residual.den);
        });

    py::class_<ParityStat>(m, "ParityStat")
        .def_readonly("radius", &ParityStat::radius)
        .def_readonly("components", &ParityStat::components)
        .def_readonly("disagreeing", &ParityStat::disagreeing)
        .def_property_readonly("frequency", [](const ParityStat& s) {
            Rational f = s.frequency();
            return py::make_tuple(f.num, f.den);
        });

    m.def("graph_from_json",
          [](const std::string& text) { return unconst(graph_from_json(nlohmann::json::parse(text))); });
    m.def("graph_to_json", [](const PyGraph& g) { return graph_to_json(*g).dump(); });
    m.def(
        "gen_random_regular_bipartite",
        [](int n, int d, std::uint64_t seed) {
            return unconst(gen_random_regular_bipartite(n, d, seed));
        },
        py::arg("n"), py::arg("d"), py::arg("seed"));
    m.def("gen_oracle", &gen_oracle, py::arg("m"), py::arg("shifts"));
    m.def("make_window", &make_window, py::arg("oracle"), py::arg("center"), py::arg("radius"));
    m.def(
        "make_torus", [](const OracleGraph& o, int len) { return unconst(make_torus(o, len)); },
        py::arg("oracle"), py::arg("length"));
    m.def(
        "uniform_matching",
        [](const PyGraph& g, int d, int k) {
            return FractionalMatching::uniform_regular(g, d, k);
        },
        py::arg("graph"), py::arg("d"), py::arg("k"));
    m.def("round_to_acyclic",
          [](const FractionalMatching& f) { return round_to_acyclic(f, nullptr); });
    m.def("lemma_main", [](const FractionalMatching& f) { return lemma_main(f); });
    m.def("lemma_main_window", &lemma_main_window, py::arg("window"), py::arg("matching"));
    m.def(
        "two_factor", [](const PyGraph& g, int d) { return two_factor(g, d); }, py::arg("graph"),
        py::arg("d"));
    m.def(
        "k_factor", [](const PyGraph& g, int d, int k) { return k_factor(g, d, k); },
        py::arg("graph"), py::arg("d"), py::arg("k"));
    m.def("k_factor_window", &k_factor_window, py::arg("window"), py::arg("k"));
    m.def(
        "verify_factor",
        [](const PyGraph& g, const std::vector<int>& edges, int k) {
            return verify_factor(*g, edges, k);
        },
        py::arg("graph"), py::arg("edge_ids"), py::arg("k"));
    m.def(
        "enumerate_k_factors",
        [](const PyGraph& g, int k) { return enumerate_k_factors(*g, k); }, py::arg("graph"),
        py::arg("k"));
    m.def(
        "edge_color_regular_bipartite",
        [](const PyGraph& g, int d) { return edge_color_regular_bipartite(*g, d); },
        py::arg("graph"), py::arg("d"));
    m.def("window_residual_experiment", &window_residual_experiment, py::arg("oracle"),
          py::arg("radii"), py::arg("k"), py::arg("centers"), py::arg("seed"),
          py::arg("jobs") = 1);
    m.def("parity_obstruction_experiment", &parity_obstruction_experiment, py::arg("oracle"),
          py::arg("radii"), py::arg("pairs"), py::arg("seed"), py::arg("jobs") = 1);
}
