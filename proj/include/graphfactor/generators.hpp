#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "graphfactor/graph.hpp"

namespace graphfactor {

// Seeded RNG with explicit rejection sampling so results do not depend on
// the standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    std::uint64_t below(std::uint64_t n);
    // In-place Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

  private:
    std::mt19937_64 eng_;
};

// Union of d independent uniformly random perfect matchings between the
// sides; deterministic given the seed. Vertices 0..n-1 are Left, n..2n-1
// Right; edges get dense ids in generation order.
GraphPtr gen_random_regular_bipartite(int n, int d, std::uint64_t seed);

// Oracle for an infinite d-regular bipartite graph on Z^m x {Left,Right}:
// (p, Left) ~ (p + s_i, Right) for each shift s_i. Duplicate shifts give
// parallel edges.
struct OracleGraph {
    int dim = 1;
    std::vector<std::vector<int>> shifts;
    int degree() const { return static_cast<int>(shifts.size()); }
};

OracleGraph gen_oracle(int m, std::vector<std::vector<int>> shifts);

// Finite box window of an oracle. Vertex ids are dense in absolute
// lattice order (point lex, then Left<Right) and edge ids in (left point,
// shift index) order, so id order agrees across overlapping windows.
struct Window {
    GraphPtr graph;
    OracleGraph oracle;
    std::vector<int> center;
    int radius = 0;
    std::vector<int> lo, hi;                // inclusive box bounds
    std::vector<std::vector<int>> coords;   // by vertex index: lattice point
    std::vector<int> shift_index;           // by edge index

    bool in_box(const std::vector<int>& p) const;
};

Window make_window(const OracleGraph& o, const std::vector<int>& center, int radius);

// Quotient of the oracle by (L*Z)^m: a finite boundary-free graph.
GraphPtr make_torus(const OracleGraph& o, int length);

// Acyclic graph whose marked leaves ("stubs") stand in for infinite
// continuations. Stubs are also flagged as boundary vertices.
struct BoundariedForest {
    GraphPtr graph;
    std::vector<int> stubs;  // sorted vertex ids
    bool is_stub(int vertex_id) const;
};

enum class ForestKind { Spider, Path, RandomLeafless };

struct ForestSpec {
    ForestKind kind = ForestKind::Spider;
    int rays = 3;        // Spider: number of rays from the degree-`rays` root
    int ray_length = 4;  // Spider: vertices per ray (excluding the root)
    int length = 10;     // Path: number of vertices
    int vertices = 50;   // RandomLeafless: number of vertices
};

BoundariedForest gen_boundaried_forest(const ForestSpec& spec, std::uint64_t seed);

}  // namespace graphfactor
