#include "graphfactor/general_graph.hpp"

#include <algorithm>
#include <numeric>

#include "graphfactor/generators.hpp"
#include "graphfactor/pipeline.hpp"

namespace graphfactor {

int GeneralMultigraph::degree(int v) const {
    int d = 0;
    for (const auto& e : edges) {
        if (e.u == v) d++;
        if (e.v == v) d++;
    }
    return d;
}

Orientation balanced_orientation(const GeneralMultigraph& g) {
    for (int v = 0; v < g.n; ++v)
        if (g.degree(v) % 2 != 0)
            throw StructuralError("vertex " + std::to_string(v) + " has odd degree");
    Orientation o;
    o.forward.assign(g.edges.size(), 0);
    // Hierholzer tour per component; traversal direction orients edges.
    std::vector<std::vector<int>> inc(g.n);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        inc[g.edges[i].u].push_back(static_cast<int>(i));
        if (g.edges[i].v != g.edges[i].u) inc[g.edges[i].v].push_back(static_cast<int>(i));
    }
    std::vector<char> used(g.edges.size(), 0);
    std::vector<std::size_t> next(g.n, 0);
    for (int start = 0; start < g.n; ++start) {
        if (next[start] >= inc[start].size()) continue;
        std::vector<int> stack{start};
        while (!stack.empty()) {
            int v = stack.back();
            while (next[v] < inc[v].size() && used[inc[v][next[v]]]) next[v]++;
            if (next[v] == inc[v].size()) {
                stack.pop_back();
                continue;
            }
            int ei = inc[v][next[v]];
            used[ei] = 1;
            const auto& e = g.edges[ei];
            int w = e.u == v ? e.v : e.u;
            o.forward[ei] = (e.u == v) ? 1 : 0;
            stack.push_back(w);
        }
    }
    if (!orientation_is_balanced(g, o)) throw InvariantViolation("Euler orientation unbalanced");
    return o;
}

bool orientation_is_balanced(const GeneralMultigraph& g, const Orientation& o) {
    std::vector<int> out(g.n, 0), in(g.n, 0);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        int from = o.forward[i] ? e.u : e.v;
        int to = o.forward[i] ? e.v : e.u;
        out[from]++;
        in[to]++;
    }
    for (int v = 0; v < g.n; ++v)
        if (out[v] != in[v]) return false;
    return true;
}

GeneralMultigraph gen_random_even_regular(int n, int k, std::uint64_t seed) {
    if (n < 1 || k < 1) throw StructuralError("need n >= 1, k >= 1");
    Rng rng(seed);
    GeneralMultigraph g;
    g.n = n;
    int next_id = 0;
    std::vector<int> perm(n);
    for (int round = 0; round < k; ++round) {
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        for (int i = 0; i < n; ++i) g.edges.push_back({next_id++, i, perm[i]});
    }
    return g;
}

GeneralFactorResult corollary_factor(const GeneralMultigraph& g, const Orientation& o, int k) {
    if (!orientation_is_balanced(g, o)) throw StructuralError("orientation is not balanced");
    for (int v = 0; v < g.n; ++v)
        if (g.degree(v) != 2 * k)
            throw StructuralError("graph is not 2k-regular at vertex " + std::to_string(v));
    // Auxiliary bipartite graph: v1 (Left, id 2v) and v2 (Right, id 2v+1);
    // a directed edge u->v becomes {u1, v2}. Balanced orientation makes it
    // k-regular.
    std::vector<VertexSpec> verts;
    for (int v = 0; v < g.n; ++v) {
        verts.push_back({2 * v, Side::Left, false});
        verts.push_back({2 * v + 1, Side::Right, false});
    }
    std::vector<EdgeSpec> edges;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        int from = o.forward[i] ? e.u : e.v;
        int to = o.forward[i] ? e.v : e.u;
        edges.push_back({e.id, 2 * from, 2 * to + 1});
    }
    auto aux = std::make_shared<BipartiteMultigraph>(std::move(verts), std::move(edges));
    const int kprime = k % 2 != 0 ? 1 : 2;
    FactorSubgraph h = k_factor(aux, k, kprime);
    GeneralFactorResult out;
    out.k = 2 * kprime;
    out.edge_ids = h.edge_ids;  // aux edge ids are the original edge ids
    std::sort(out.edge_ids.begin(), out.edge_ids.end());
    if (!verify_general_factor(g, out.edge_ids, out.k))
        throw InvariantViolation("corollary pullback is not a " + std::to_string(out.k) +
                                 "-factor");
    return out;
}

bool verify_general_factor(const GeneralMultigraph& g, const std::vector<int>& edge_ids, int k) {
    std::vector<int> deg(g.n, 0);
    std::vector<char> chosen;
    chosen.assign(g.edges.size(), 0);
    for (int id : edge_ids) {
        bool found = false;
        for (std::size_t i = 0; i < g.edges.size(); ++i)
            if (g.edges[i].id == id) {
                chosen[i] = 1;
                found = true;
                break;
            }
        if (!found) return false;
    }
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        if (chosen[i]) {
            deg[g.edges[i].u]++;
            deg[g.edges[i].v]++;
        }
    for (int v = 0; v < g.n; ++v)
        if (deg[v] != k) return false;
    return true;
}

}  // namespace graphfactor
