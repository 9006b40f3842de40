#pragma once

#include <cstdint>
#include <vector>

#include "graphfactor/graph.hpp"

namespace graphfactor {

// Edges with weight strictly between 0 and 1.
struct SupportSubgraph {
    GraphPtr graph;
    std::vector<int> edge_ids;  // sorted
    bool contains(int edge_id) const;
    int degree(int vertex_id) const;
};

// Exact fractional k-matching: integer numerators over one shared
// denominator. Vertex sums are checked at non-boundary vertices only.
class FractionalMatching {
  public:
    FractionalMatching(GraphPtr g, std::int64_t denominator, int target_k);

    // f == k/d on every edge of a d-regular graph.
    static FractionalMatching uniform_regular(GraphPtr g, int d, int k);

    const BipartiteMultigraph& graph() const { return *graph_; }
    GraphPtr graph_ptr() const { return graph_; }
    std::int64_t denominator() const { return denominator_; }
    int target() const { return k_; }

    std::int64_t weight_num(int edge_id) const { return num_[graph_->edge_index(edge_id)]; }
    void set_weight_num(int edge_id, std::int64_t value);
    std::int64_t vertex_sum_num(int vertex_id) const;

    bool is_fractional_k_matching() const;
    SupportSubgraph support() const;

    // Move every weight to a new denominator; throws if not exact.
    FractionalMatching regrid(std::int64_t new_denominator) const;

  private:
    GraphPtr graph_;
    std::int64_t denominator_;
    int k_;
    std::vector<std::int64_t> num_;  // by edge index
};

}  // namespace graphfactor
