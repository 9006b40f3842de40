#include "graphfactor/graph.hpp"

#include <algorithm>
#include <numeric>

namespace graphfactor {

BipartiteMultigraph::BipartiteMultigraph(std::vector<VertexSpec> vertices,
                                         std::vector<EdgeSpec> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    vindex_.reserve(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const auto& v = vertices_[i];
        if (!vindex_.emplace(v.id, static_cast<int>(i)).second)
            throw StructuralError("duplicate vertex id " + std::to_string(v.id));
    }
    eindex_.reserve(edges_.size());
    incidence_.assign(vertices_.size(), {});
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        if (!eindex_.emplace(e.id, static_cast<int>(i)).second)
            throw StructuralError("duplicate edge id " + std::to_string(e.id));
        auto lu = vindex_.find(e.left);
        auto rv = vindex_.find(e.right);
        if (lu == vindex_.end() || rv == vindex_.end())
            throw StructuralError("edge " + std::to_string(e.id) + " has a dangling endpoint");
        if (vertices_[lu->second].side != Side::Left || vertices_[rv->second].side != Side::Right)
            throw StructuralError("edge " + std::to_string(e.id) + " does not join Left to Right");
        incidence_[lu->second].push_back(e.id);
        incidence_[rv->second].push_back(e.id);
    }
    for (auto& inc : incidence_) std::sort(inc.begin(), inc.end());
}

int BipartiteMultigraph::vertex_index(int id) const {
    auto it = vindex_.find(id);
    if (it == vindex_.end()) throw StructuralError("unknown vertex id " + std::to_string(id));
    return it->second;
}

int BipartiteMultigraph::edge_index(int id) const {
    auto it = eindex_.find(id);
    if (it == eindex_.end()) throw StructuralError("unknown edge id " + std::to_string(id));
    return it->second;
}

int BipartiteMultigraph::other_endpoint(int edge_id, int vertex_id) const {
    const auto& e = edge(edge_id);
    if (e.left == vertex_id) return e.right;
    if (e.right == vertex_id) return e.left;
    throw StructuralError("vertex " + std::to_string(vertex_id) + " not on edge " +
                          std::to_string(edge_id));
}

bool BipartiteMultigraph::is_regular(int d) const {
    for (const auto& v : vertices_)
        if (degree(v.id) != d) return false;
    return true;
}

BipartiteMultigraph BipartiteMultigraph::without_edges(const std::vector<int>& edge_ids) const {
    std::vector<char> drop(edges_.size(), 0);
    for (int id : edge_ids) drop[edge_index(id)] = 1;
    std::vector<EdgeSpec> kept;
    kept.reserve(edges_.size() - edge_ids.size());
    for (std::size_t i = 0; i < edges_.size(); ++i)
        if (!drop[i]) kept.push_back(edges_[i]);
    return BipartiteMultigraph(vertices_, std::move(kept));
}

BipartiteMultigraph BipartiteMultigraph::with_boundary(const std::vector<int>& vertex_ids) const {
    auto verts = vertices_;
    for (int id : vertex_ids) verts[vertex_index(id)].boundary = true;
    return BipartiteMultigraph(std::move(verts), edges_);
}

bool validate_regular_bipartite(const BipartiteMultigraph& g, int d) {
    return g.is_regular(d);
}

BipartiteMultigraph subtract_factor(const BipartiteMultigraph& g, const FactorSubgraph& h) {
    std::vector<int> degree_in_h(g.vertex_count(), 0);
    for (int id : h.edge_ids) {
        if (!g.has_edge(id))
            throw StructuralError("factor edge " + std::to_string(id) + " is not in the graph");
        const auto& e = g.edge(id);
        degree_in_h[g.vertex_index(e.left)]++;
        degree_in_h[g.vertex_index(e.right)]++;
    }
    for (const auto& v : g.vertices())
        if (!v.boundary && degree_in_h[g.vertex_index(v.id)] != h.k)
            throw InvariantViolation("subgraph is not " + std::to_string(h.k) +
                                     "-regular at vertex " + std::to_string(v.id));
    return g.without_edges(h.edge_ids);
}

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw StructuralError("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

bool Rational::operator<(const Rational& o) const {
    return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
}

Rational Rational::operator*(const Rational& o) const {
    return Rational(num * o.num, den * o.den);
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace graphfactor
