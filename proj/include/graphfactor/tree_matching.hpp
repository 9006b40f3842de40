#pragma once

#include <vector>

#include "graphfactor/generators.hpp"
#include "graphfactor/matching.hpp"

namespace graphfactor {

// A ray toward a stub. ray[0] is the root, ray.back() the stub;
// ray_edges[i] joins ray[i] and ray[i+1]. Canonical representatives have
// root degree 3 and degree 2 on every later vertex.
struct BadRayReport {
    std::vector<int> ray;
    std::vector<int> ray_edges;
};

// One canonical representative per stub whose backward walk through
// degree-2 vertices ends at a degree-3 vertex.
std::vector<BadRayReport> find_bad_ray_reps(const BoundariedForest& f);

// General detector for the weight-profile law: every root-to-stub path
// whose even-position interior vertices all have degree 2.
std::vector<BadRayReport> enumerate_bad_rays(const BoundariedForest& f);

struct PruneResult {
    BoundariedForest forest;        // H': each represented ray truncated after x_1
    std::vector<int> y_vertices;    // the x_1's, sorted
    std::vector<BadRayReport> reps; // the reps actually pruned
};

PruneResult prune_bad_rays(const BoundariedForest& f, std::vector<BadRayReport> reps);

struct TreeMatchResult {
    std::vector<int> matched_edges;      // sorted edge ids
    std::vector<int> infeasible_vertices;  // mandatory vertices of infeasible components
};

// Matching covering every non-Y, non-stub, non-boundary vertex, by
// leaf-to-root DP per tree component. Y vertices and stubs are optional
// absorbers. Ties: prefer edges with weight > 1/2 when weights are given,
// then smallest edge id.
TreeMatchResult match_leafless_forest(const BoundariedForest& hprime, const std::vector<int>& y,
                                      const FractionalMatching* weights = nullptr);

// Extend a matching of H' along each pruned ray: pairs (x_n, x_{n+1}) for
// even n if (x_0,x_1) is matched, for odd n otherwise.
std::vector<int> extend_along_rays(const std::vector<int>& matched_edges,
                                   const std::vector<BadRayReport>& reps);

// The monotonicity law for w(n) = f(x_{2n}, x_{2n+1}): constant across
// degree-2 odd vertices, strictly increasing across higher-degree ones,
// and even-position interior vertices have degree 2.
bool weight_profile_check(const FractionalMatching& f, const BadRayReport& report);

int count_strict_increases(const FractionalMatching& f, const BadRayReport& report);

}  // namespace graphfactor
