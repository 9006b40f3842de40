#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphfactor/generators.hpp"
#include "graphfactor/matching.hpp"
#include "graphfactor/pipeline.hpp"

namespace graphfactor {

// True iff every non-boundary vertex has exactly k incident edges of h.
bool verify_factor(const BipartiteMultigraph& g, const std::vector<int>& edge_ids, int k);

// Brute-force enumeration of k-factors over edge subsets with per-vertex
// degree pruning. Refuses graphs with more than `guard` edges.
std::int64_t enumerate_k_factors(const BipartiteMultigraph& g, int k,
                                 std::vector<std::vector<int>>* factors = nullptr,
                                 int guard = 24);

// Proper d-edge-coloring of a d-regular bipartite multigraph by repeated
// augmenting-path perfect matchings; each class is a 1-factor.
std::vector<std::vector<int>> edge_color_regular_bipartite(const BipartiteMultigraph& g, int d);

struct ResidualReport {
    std::string window_id;
    int radius = 0;
    std::vector<int> center;
    std::int64_t interior = 0;
    std::int64_t unresolved = 0;
    Rational residual;
};

// Full pipeline on windows at the given radii over seeded centers.
std::vector<ResidualReport> window_residual_experiment(const OracleGraph& o,
                                                       const std::vector<int>& radii, int k,
                                                       int centers, std::uint64_t seed,
                                                       int jobs = 1);

struct ParityStat {
    int radius = 0;
    std::int64_t components = 0;    // overlap components examined
    std::int64_t disagreeing = 0;   // components where the matchings differ
    std::int64_t compared_vertices = 0;
    Rational frequency() const {
        return components == 0 ? Rational(0, 1) : Rational(disagreeing, components);
    }
};

// Overlapping window pairs solved independently; disagreement measured
// per overlap component on commonly matched deep-interior vertices.
std::vector<ParityStat> parity_obstruction_experiment(const OracleGraph& o,
                                                      const std::vector<int>& radii, int pairs,
                                                      std::uint64_t seed, int jobs = 1);

std::string residual_csv(const std::vector<ResidualReport>& reports);
std::string parity_csv(const std::vector<ParityStat>& stats);

}  // namespace graphfactor
