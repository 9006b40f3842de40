#include "doctest.h"

#include "graphfactor/graph.hpp"
#include "graphfactor/matching.hpp"
#include "test_helpers.hpp"

using namespace graphfactor;

TEST_CASE("construction rejects malformed graphs") {
    std::vector<VertexSpec> verts{{0, Side::Left}, {1, Side::Right}};
    CHECK_THROWS_AS(BipartiteMultigraph(verts, {{0, 0, 2}}), StructuralError);
    CHECK_THROWS_AS(BipartiteMultigraph(verts, {{0, 1, 0}}), StructuralError);  // wrong sides
    CHECK_THROWS_AS(BipartiteMultigraph({{0, Side::Left}, {0, Side::Right}}, {}), StructuralError);
    std::vector<EdgeSpec> dup{{0, 0, 1}, {0, 0, 1}};
    CHECK_THROWS_AS(BipartiteMultigraph(verts, dup), StructuralError);
}

TEST_CASE("validate_regular_bipartite") {
    auto k33 = complete_bipartite(3);
    CHECK(validate_regular_bipartite(*k33, 3));
    CHECK_FALSE(validate_regular_bipartite(*k33, 2));

    auto c6 = even_cycle(3);
    CHECK(validate_regular_bipartite(*c6, 2));

    auto broken = k33->without_edges({0});
    CHECK_FALSE(validate_regular_bipartite(broken, 3));
}

TEST_CASE("parallel edges count separately in degrees") {
    std::vector<VertexSpec> verts{{0, Side::Left}, {1, Side::Right}};
    std::vector<EdgeSpec> edges{{0, 0, 1}, {1, 0, 1}, {2, 0, 1}};
    BipartiteMultigraph g(verts, edges);
    CHECK(g.degree(0) == 3);
    CHECK(g.degree(1) == 3);
    CHECK(g.is_regular(3));
}

TEST_CASE("support of uniform matchings") {
    auto k33 = complete_bipartite(3);
    auto f = uniform_matching(k33, 3, 1);
    CHECK(f.is_fractional_k_matching());
    auto s = f.support();
    CHECK(s.edge_ids.size() == 9);

    // Integral matching: empty support.
    FractionalMatching pm(k33, 3, 1);
    for (int i = 0; i < 3; ++i) pm.set_weight_num(i * 3 + i, 3);
    CHECK(pm.is_fractional_k_matching());
    CHECK(pm.support().edge_ids.empty());

    auto c4 = even_cycle(2);
    auto h = uniform_matching(c4, 2, 1);
    CHECK(h.support().edge_ids.size() == 4);
}

TEST_CASE("support flags degree-1 interior violations") {
    // Path a - b - c with a fractional middle edge only.
    std::vector<VertexSpec> verts{{0, Side::Left}, {1, Side::Right}, {2, Side::Left}};
    std::vector<EdgeSpec> edges{{0, 0, 1}, {1, 2, 1}};
    auto g = std::make_shared<BipartiteMultigraph>(verts, edges);
    FractionalMatching f(g, 2, 1);
    f.set_weight_num(0, 1);
    f.set_weight_num(1, 2);
    CHECK_THROWS_AS(f.support(), InvariantViolation);
}

TEST_CASE("is_fractional_k_matching examples") {
    auto k33 = complete_bipartite(3);
    CHECK(uniform_matching(k33, 3, 1).is_fractional_k_matching());

    FractionalMatching wrong_k(k33, 3, 2);
    for (const auto& e : k33->edges()) wrong_k.set_weight_num(e.id, 1);
    CHECK_FALSE(wrong_k.is_fractional_k_matching());

    // d=4, k=2 pattern at a vertex: three edges of 1/3 and one of 1.
    std::vector<VertexSpec> verts{{0, Side::Left},  {1, Side::Right}, {2, Side::Right},
                                  {3, Side::Right}, {4, Side::Right}};
    for (auto& v : verts)
        if (v.id != 0) v.boundary = true;
    std::vector<EdgeSpec> edges{{0, 0, 1}, {1, 0, 2}, {2, 0, 3}, {3, 0, 4}};
    auto star = std::make_shared<BipartiteMultigraph>(verts, edges);
    FractionalMatching f(star, 3, 2);
    f.set_weight_num(0, 1);
    f.set_weight_num(1, 1);
    f.set_weight_num(2, 1);
    f.set_weight_num(3, 3);
    CHECK(f.is_fractional_k_matching());  // 3*(1/3) + 1 = 2
}

TEST_CASE("subtract_factor") {
    auto k33 = complete_bipartite(3);
    FactorSubgraph pm{k33, {0, 4, 8}, 1};  // diagonal matching
    auto rest = subtract_factor(*k33, pm);
    CHECK(validate_regular_bipartite(rest, 2));

    FactorSubgraph empty{k33, {}, 0};
    auto same = subtract_factor(*k33, empty);
    CHECK(same.edge_count() == 9);

    auto dc = doubled_cycle(2);  // 4-regular on 4 vertices
    FactorSubgraph copy1{dc, {0, 1, 2, 3}, 2};
    auto other = subtract_factor(*dc, copy1);
    CHECK(validate_regular_bipartite(other, 2));

    FactorSubgraph not_sub{k33, {99}, 1};
    CHECK_THROWS_AS(subtract_factor(*k33, not_sub), StructuralError);

    FactorSubgraph not_reg{k33, {0, 1}, 1};
    CHECK_THROWS_AS(subtract_factor(*k33, not_reg), InvariantViolation);
}

TEST_CASE("regrid is exact or fails") {
    auto c4 = even_cycle(2);
    auto f = uniform_matching(c4, 2, 1);
    auto g2 = f.regrid(4);
    CHECK(g2.denominator() == 4);
    CHECK(g2.weight_num(0) == 2);
    CHECK(g2.is_fractional_k_matching());
    CHECK_THROWS_AS(f.regrid(3), InvariantViolation);
}

TEST_CASE("rational helper") {
    Rational r(2, 4);
    CHECK(r.num == 1);
    CHECK(r.den == 2);
    CHECK(r.str() == "1/2");
    CHECK(Rational(3, 1).str() == "3");
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK((Rational(1, 6) + Rational(1, 3)) == Rational(1, 2));
}
