#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "graphfactor/matching.hpp"

namespace graphfactor {

enum class Direction { Increase, Decrease };

// Alternating +/- delta walk around an even cycle of the support. The
// designated edge moves in `direction`; every vertex keeps its sum.
struct CycleUpdate {
    std::vector<int> edge_ids;  // cyclic order
    int star_pos = 0;           // position of the designated edge in edge_ids
    Direction direction = Direction::Decrease;
    std::int64_t step = 1;  // numerator units (delta = step/denominator)
};

FractionalMatching apply_cycle_update(const FractionalMatching& f, const CycleUpdate& u);

// Smallest-id-first search for a cycle in supp(f) avoiding boundary
// vertices. The designated edge is the smallest edge id on the cycle, the
// direction Decrease, and the step the largest that keeps all weights in
// [0,1] (so some edge saturates).
std::optional<CycleUpdate> find_support_cycle(const FractionalMatching& f);

struct TraceEntry {
    int round = 0;
    std::vector<int> cycle;
    Direction direction = Direction::Decrease;
    std::int64_t support_size = 0;  // after the update
};

// Saturating cycle elimination until the support has no cycle through
// non-boundary vertices. At most |E| updates. On a finite boundary-free
// graph the result is integral.
FractionalMatching round_to_acyclic(const FractionalMatching& f,
                                    std::vector<TraceEntry>* trace = nullptr);

struct SigmaStep {
    std::uint32_t color = 0;  // rotates the scan order, standing in for one cycle color class
    bool bit = false;         // false: increase at the selected edge, true: decrease
};

// Single-step scheduler: each round applies one +/- 1/denominator
// alternation to a maximal vertex-disjoint family of support cycles.
FractionalMatching sigma_round(const FractionalMatching& f, const std::vector<SigmaStep>& sigma,
                               int steps, std::vector<TraceEntry>* trace = nullptr);

std::vector<SigmaStep> random_sigma(std::uint64_t seed, int steps, std::uint32_t colors);

enum class DenominatorParity { Odd, Even };

// On support components whose non-boundary vertices all have support
// degree <= 2 (window images of bi-infinite paths): round every weight to
// the nearest integer (odd denominators; weights alternate below/above
// 1/2) or set every weight to 1/2 (even case; regrids to 2*denominator
// first when the grid cannot express 1/2). Requires k == 1.
FractionalMatching resolve_path_components(const FractionalMatching& f, DenominatorParity parity);

namespace detail {

// Cycle search restricted to `allowed` vertices (by vertex id). Used by
// the window engine with tile regions; find_support_cycle passes the
// non-boundary vertices. `candidates`, when given, limits the scan to
// those vertex ids.
std::optional<CycleUpdate> find_cycle_in(const FractionalMatching& f,
                                         const std::function<bool(int)>& allowed,
                                         std::size_t scan_offset = 0,
                                         const std::vector<int>* candidates = nullptr);

void apply_cycle_update_inplace(FractionalMatching& f, const CycleUpdate& u);

// Ids of support components every non-boundary vertex of which has
// support degree <= 2 (paths, and leftover cycles on windows).
std::vector<std::vector<int>> path_like_components(const FractionalMatching& f);

}  // namespace detail

}  // namespace graphfactor
