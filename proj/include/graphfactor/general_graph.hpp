#pragma once

#include <cstdint>
#include <vector>

#include "graphfactor/graph.hpp"

namespace graphfactor {

// Minimal non-bipartite multigraph for the balanced-orientation corollary.
// Self-loops are allowed and count 2 toward the degree.
struct GeneralEdge {
    int id = 0;
    int u = 0;
    int v = 0;
};

struct GeneralMultigraph {
    int n = 0;  // vertices 0..n-1
    std::vector<GeneralEdge> edges;
    int degree(int v) const;
};

// Per edge: true if oriented u -> v, false if v -> u.
struct Orientation {
    std::vector<char> forward;  // by edge index
};

// Euler-tour orientation of each component; in-degree equals out-degree
// at every vertex. Throws on odd-degree vertices.
Orientation balanced_orientation(const GeneralMultigraph& g);

bool orientation_is_balanced(const GeneralMultigraph& g, const Orientation& o);

// Union of k random cycle covers: a 2k-regular multigraph.
GeneralMultigraph gen_random_even_regular(int n, int k, std::uint64_t seed);

struct GeneralFactorResult {
    std::vector<int> edge_ids;  // sorted
    int k = 0;                  // resulting regularity (2 or 4)
};

// Auxiliary bipartite graph on {v1, v2} from the balanced orientation,
// then a 1- or 2-factor of it pulled back: a 2-factor when k is odd, a
// 4-factor when k is even. G must be 2k-regular.
GeneralFactorResult corollary_factor(const GeneralMultigraph& g, const Orientation& o, int k);

bool verify_general_factor(const GeneralMultigraph& g, const std::vector<int>& edge_ids, int k);

}  // namespace graphfactor
