#include "graphfactor/matching.hpp"

#include <algorithm>

namespace graphfactor {

bool SupportSubgraph::contains(int edge_id) const {
    return std::binary_search(edge_ids.begin(), edge_ids.end(), edge_id);
}

int SupportSubgraph::degree(int vertex_id) const {
    int d = 0;
    for (int e : graph->incident(vertex_id))
        if (contains(e)) d++;
    return d;
}

FractionalMatching::FractionalMatching(GraphPtr g, std::int64_t denominator, int target_k)
    : graph_(std::move(g)), denominator_(denominator), k_(target_k) {
    if (denominator_ <= 0) throw StructuralError("denominator must be positive");
    if (k_ < 0) throw StructuralError("target k must be non-negative");
    num_.assign(graph_->edge_count(), 0);
}

FractionalMatching FractionalMatching::uniform_regular(GraphPtr g, int d, int k) {
    if (!validate_regular_bipartite(*g, d))
        throw StructuralError("graph is not " + std::to_string(d) + "-regular");
    if (k > d) throw StructuralError("k exceeds d");
    FractionalMatching f(std::move(g), d == 0 ? 1 : d, k);
    for (auto& w : f.num_) w = k;
    return f;
}

void FractionalMatching::set_weight_num(int edge_id, std::int64_t value) {
    if (value < 0 || value > denominator_)
        throw InvariantViolation("weight outside [0,1] on edge " + std::to_string(edge_id));
    num_[graph_->edge_index(edge_id)] = value;
}

std::int64_t FractionalMatching::vertex_sum_num(int vertex_id) const {
    std::int64_t s = 0;
    for (int e : graph_->incident(vertex_id)) s += num_[graph_->edge_index(e)];
    return s;
}

bool FractionalMatching::is_fractional_k_matching() const {
    for (auto w : num_)
        if (w < 0 || w > denominator_) return false;
    const std::int64_t want = static_cast<std::int64_t>(k_) * denominator_;
    for (const auto& v : graph_->vertices()) {
        if (v.boundary) continue;
        if (vertex_sum_num(v.id) != want) return false;
    }
    return true;
}

SupportSubgraph FractionalMatching::support() const {
    SupportSubgraph s;
    s.graph = graph_;
    for (const auto& e : graph_->edges()) {
        std::int64_t w = num_[graph_->edge_index(e.id)];
        if (w > 0 && w < denominator_) s.edge_ids.push_back(e.id);
    }
    std::sort(s.edge_ids.begin(), s.edge_ids.end());
    for (const auto& v : graph_->vertices()) {
        if (v.boundary) continue;
        if (s.degree(v.id) == 1)
            throw InvariantViolation("support degree 1 at non-boundary vertex " +
                                     std::to_string(v.id));
    }
    return s;
}

FractionalMatching FractionalMatching::regrid(std::int64_t new_denominator) const {
    if (new_denominator <= 0) throw StructuralError("denominator must be positive");
    FractionalMatching out(graph_, new_denominator, k_);
    for (std::size_t i = 0; i < num_.size(); ++i) {
        __int128 scaled = static_cast<__int128>(num_[i]) * new_denominator;
        if (scaled % denominator_ != 0)
            throw InvariantViolation("regrid to " + std::to_string(new_denominator) +
                                     " is not exact");
        out.num_[i] = static_cast<std::int64_t>(scaled / denominator_);
    }
    return out;
}

}  // namespace graphfactor
