#include "doctest.h"

#include "graphfactor/json_io.hpp"
#include "test_helpers.hpp"

using namespace graphfactor;
using nlohmann::json;

TEST_CASE("graph json round trip") {
    auto k33 = complete_bipartite(3);
    json j = graph_to_json(*k33);
    auto back = graph_from_json(j);
    CHECK(back->vertex_count() == 6);
    CHECK(back->edge_count() == 9);
    CHECK(graph_to_json(*back) == j);
    CHECK(j["vertices"][0]["side"] == "L");
}

TEST_CASE("matching json round trip") {
    auto c4 = even_cycle(2);
    auto f = uniform_matching(c4, 2, 1);
    json j = matching_to_json(f);
    CHECK(j["denominator"] == 2);
    CHECK(j["k"] == 1);
    auto back = matching_from_json(j);
    CHECK(back.is_fractional_k_matching());
    for (const auto& e : c4->edges()) CHECK(back.weight_num(e.id) == f.weight_num(e.id));
}

TEST_CASE("factor and forest json") {
    auto k33 = complete_bipartite(3);
    FactorSubgraph h{k33, {0, 4, 8}, 1};
    json j = factor_to_json(h);
    auto back = factor_from_json(j, k33);
    CHECK(back.edge_ids == h.edge_ids);
    CHECK(back.k == 1);

    ForestSpec spec;
    spec.kind = ForestKind::Spider;
    auto f = gen_boundaried_forest(spec, 1);
    json fj = forest_to_json(f);
    auto fback = forest_from_json(fj);
    CHECK(fback.stubs == f.stubs);
    CHECK(fback.graph->vertex_count() == f.graph->vertex_count());
}

TEST_CASE("malformed json is a structural error") {
    json j;
    j["vertices"] = json::array({json{{"id", 0}, {"side", "X"}}});
    j["edges"] = json::array();
    CHECK_THROWS_AS(graph_from_json(j), StructuralError);
    CHECK_THROWS_AS(graph_from_json(json::object()), StructuralError);
}

TEST_CASE("dot export carries weight labels") {
    auto c4 = even_cycle(2);
    auto f = uniform_matching(c4, 2, 1);
    auto dot = to_dot(*c4, &f);
    CHECK(dot.find("1/2") != std::string::npos);
    CHECK(dot.find("graph G {") != std::string::npos);
}

TEST_CASE("window json embeds provenance") {
    auto line = gen_oracle(1, {{0}, {1}});
    Window w = make_window(line, {0}, 3);
    json j = window_to_json(w);
    CHECK(j["radius"] == 3);
    CHECK(j["vertices"][0].contains("coords"));
    CHECK(j["edges"][0].contains("shift"));
    // Still loads as a plain graph (extras ignored).
    auto g = graph_from_json(j);
    CHECK(g->vertex_count() == w.graph->vertex_count());
}
