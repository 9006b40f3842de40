#include "graphfactor/tree_matching.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace graphfactor {

namespace {

int unique_neighbor_edge(const BipartiteMultigraph& g, int v, int avoid_edge) {
    for (int e : g.incident(v))
        if (e != avoid_edge) return e;
    return -1;
}

}  // namespace

std::vector<BadRayReport> find_bad_ray_reps(const BoundariedForest& f) {
    const auto& g = *f.graph;
    std::vector<BadRayReport> reps;
    for (int s : f.stubs) {
        if (g.degree(s) != 1) continue;
        BadRayReport r;
        r.ray.push_back(s);
        int prev_edge = -1;
        int cur = s;
        while (true) {
            int e = unique_neighbor_edge(g, cur, prev_edge);
            if (e < 0) break;
            int nxt = g.other_endpoint(e, cur);
            r.ray.push_back(nxt);
            r.ray_edges.push_back(e);
            if (g.degree(nxt) != 2 || f.is_stub(nxt) || g.boundary(nxt)) break;
            prev_edge = e;
            cur = nxt;
        }
        int root = r.ray.back();
        // Need at least one visible degree-2 vertex between root and stub.
        if (r.ray.size() < 3) continue;
        if (g.degree(root) != 3 || f.is_stub(root) || g.boundary(root)) continue;
        std::reverse(r.ray.begin(), r.ray.end());
        std::reverse(r.ray_edges.begin(), r.ray_edges.end());
        reps.push_back(std::move(r));
    }
    std::sort(reps.begin(), reps.end(), [](const BadRayReport& a, const BadRayReport& b) {
        return std::pair(a.ray[0], a.ray[1]) < std::pair(b.ray[0], b.ray[1]);
    });
    return reps;
}

std::vector<BadRayReport> enumerate_bad_rays(const BoundariedForest& f) {
    const auto& g = *f.graph;
    std::vector<BadRayReport> out;
    // Roots: vertices whose degree differs from 2 (natural ray starts).
    std::vector<int> roots;
    for (const auto& v : g.vertices())
        if (g.degree(v.id) != 2 && !f.is_stub(v.id)) roots.push_back(v.id);
    for (int s : f.stubs) {
        if (g.degree(s) != 1) continue;
        // Unique tree path from each root to s, found by parent BFS from s.
        std::unordered_map<int, std::pair<int, int>> parent;  // vertex -> (next toward s, edge)
        std::vector<int> queue{s};
        std::unordered_set<int> seen{s};
        while (!queue.empty()) {
            int v = queue.back();
            queue.pop_back();
            for (int e : g.incident(v)) {
                int o = g.other_endpoint(e, v);
                if (seen.insert(o).second) {
                    parent[o] = {v, e};
                    queue.push_back(o);
                }
            }
        }
        for (int r : roots) {
            if (!parent.count(r)) continue;
            BadRayReport rep;
            rep.ray.push_back(r);
            int at = r;
            while (at != s) {
                auto [nxt, e] = parent.at(at);
                rep.ray_edges.push_back(e);
                rep.ray.push_back(nxt);
                at = nxt;
            }
            if (rep.ray.size() < 3) continue;
            bool ok = true;
            for (std::size_t i = 2; i + 1 < rep.ray.size(); i += 2) {
                int v = rep.ray[i];
                if (g.degree(v) != 2 || f.is_stub(v) || g.boundary(v)) {
                    ok = false;
                    break;
                }
            }
            // Interior vertices of the ray must be interior to the window.
            for (std::size_t i = 1; ok && i + 1 < rep.ray.size(); ++i)
                if (f.is_stub(rep.ray[i]) || g.boundary(rep.ray[i])) ok = false;
            if (ok) out.push_back(std::move(rep));
        }
    }
    return out;
}

PruneResult prune_bad_rays(const BoundariedForest& f, std::vector<BadRayReport> reps) {
    const auto& g = *f.graph;
    std::sort(reps.begin(), reps.end(), [](const BadRayReport& a, const BadRayReport& b) {
        return std::pair(a.ray[0], a.ray[1]) < std::pair(b.ray[0], b.ray[1]);
    });
    std::unordered_set<int> deleted;
    std::vector<int> y;
    std::vector<BadRayReport> applied;
    for (auto& r : reps) {
        bool intact = true;
        for (int v : r.ray)
            if (deleted.count(v)) intact = false;
        if (!intact) continue;  // overlapped an earlier (smaller-id) representative
        for (std::size_t i = 2; i < r.ray.size(); ++i) deleted.insert(r.ray[i]);
        y.push_back(r.ray[1]);
        applied.push_back(std::move(r));
    }
    std::vector<VertexSpec> verts;
    for (const auto& v : g.vertices())
        if (!deleted.count(v.id)) verts.push_back(v);
    std::vector<EdgeSpec> edges;
    for (const auto& e : g.edges())
        if (!deleted.count(e.left) && !deleted.count(e.right)) edges.push_back(e);
    PruneResult out;
    out.forest.graph = std::make_shared<BipartiteMultigraph>(std::move(verts), std::move(edges));
    out.forest.stubs.clear();
    for (int s : f.stubs)
        if (!deleted.count(s)) out.forest.stubs.push_back(s);
    std::sort(y.begin(), y.end());
    out.y_vertices = std::move(y);
    out.reps = std::move(applied);
    return out;
}

namespace {

struct DpState {
    bool can_a = false;  // matched to some child within the subtree
    bool can_b = true;   // unmatched at the top, everything mandatory below covered
};

}  // namespace

TreeMatchResult match_leafless_forest(const BoundariedForest& hprime, const std::vector<int>& y,
                                      const FractionalMatching* weights) {
    const auto& g = *hprime.graph;
    auto in_y = [&](int v) { return std::binary_search(y.begin(), y.end(), v); };
    auto optional_vertex = [&](int v) {
        return in_y(v) || hprime.is_stub(v) || g.boundary(v);
    };
    auto heavy = [&](int e) {
        return weights != nullptr && 2 * weights->weight_num(e) > weights->denominator();
    };

    TreeMatchResult result;
    std::vector<char> seen(g.vertex_count(), 0);
    for (const auto& vroot : g.vertices()) {
        if (seen[g.vertex_index(vroot.id)]) continue;
        // Collect the component.
        std::vector<int> comp{vroot.id};
        seen[g.vertex_index(vroot.id)] = 1;
        for (std::size_t qi = 0; qi < comp.size(); ++qi) {
            int v = comp[qi];
            for (int e : g.incident(v)) {
                int o = g.other_endpoint(e, v);
                if (!seen[g.vertex_index(o)]) {
                    seen[g.vertex_index(o)] = 1;
                    comp.push_back(o);
                }
            }
        }
        std::vector<int> mandatory;
        for (int v : comp)
            if (!optional_vertex(v)) mandatory.push_back(v);
        if (mandatory.empty()) continue;
        int root = *std::min_element(mandatory.begin(), mandatory.end());

        // Root the tree and get a post-order.
        std::unordered_map<int, std::pair<int, int>> par;  // vertex -> (parent, edge)
        std::vector<int> order;                            // pre-order
        order.push_back(root);
        for (std::size_t qi = 0; qi < order.size(); ++qi) {
            int v = order[qi];
            for (int e : g.incident(v)) {
                if (par.count(v) && par[v].second == e) continue;  // edge to the parent
                int o = g.other_endpoint(e, v);
                if (o == root || par.count(o))
                    throw InvariantViolation("forest contains a cycle");
                par[o] = {v, e};
                order.push_back(o);
            }
        }
        std::unordered_map<int, std::vector<std::pair<int, int>>> children;  // v -> (child, edge)
        for (int v : order)
            if (par.count(v)) children[par[v].first].push_back({v, par[v].second});
        for (auto& [v, ch] : children)
            std::sort(ch.begin(), ch.end(),
                      [](const auto& a, const auto& b) { return a.second < b.second; });

        std::unordered_map<int, DpState> dp;
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int v = *it;
            DpState st;
            const auto& ch = children[v];
            auto ok_child = [&](int c) {
                return dp[c].can_a || (dp[c].can_b && optional_vertex(c));
            };
            int bad = 0;
            int bad_child = -1;
            bool any_b = false;
            for (const auto& [c, e] : ch) {
                (void)e;
                if (!ok_child(c)) {
                    bad++;
                    bad_child = c;
                }
                if (dp[c].can_b) any_b = true;
            }
            st.can_b = bad == 0;
            if (ch.empty())
                st.can_a = false;
            else if (bad == 0)
                st.can_a = any_b;
            else if (bad == 1)
                st.can_a = dp[bad_child].can_b;
            else
                st.can_a = false;
            dp[v] = st;
        }

        if (!dp[root].can_a) {
            for (int v : mandatory) result.infeasible_vertices.push_back(v);
            continue;
        }

        // Reconstruct top-down. State true = must be matched to a child.
        std::vector<std::pair<int, bool>> stack{{root, true}};
        while (!stack.empty()) {
            auto [v, need_a] = stack.back();
            stack.pop_back();
            const auto& ch = children[v];
            auto ok_child = [&](int c) {
                return dp[c].can_a || (dp[c].can_b && optional_vertex(c));
            };
            int chosen = -1, chosen_edge = -1;
            if (need_a) {
                int bad = 0, bad_child = -1;
                for (const auto& [c, e] : ch) {
                    (void)e;
                    if (!ok_child(c)) {
                        bad++;
                        bad_child = c;
                    }
                }
                if (bad == 1) {
                    chosen = bad_child;
                    for (const auto& [c, e] : ch)
                        if (c == chosen) chosen_edge = e;
                } else {
                    // All children acceptable: among children that can be
                    // B, prefer a heavy edge, then a mandatory partner
                    // (stubs stay available for their own continuations),
                    // then the smallest edge id.
                    auto better = [&](int c, int e) {
                        if (chosen < 0) return true;
                        if (heavy(e) != heavy(chosen_edge)) return heavy(e);
                        bool cm = !optional_vertex(c), om = !optional_vertex(chosen);
                        if (cm != om) return cm;
                        return e < chosen_edge;
                    };
                    for (const auto& [c, e] : ch) {
                        if (!dp[c].can_b) continue;
                        if (better(c, e)) {
                            chosen = c;
                            chosen_edge = e;
                        }
                    }
                }
                result.matched_edges.push_back(chosen_edge);
            }
            for (const auto& [c, e] : ch) {
                (void)e;
                if (c == chosen) {
                    stack.push_back({c, false});
                } else if (!optional_vertex(c)) {
                    stack.push_back({c, true});
                } else {
                    stack.push_back({c, !dp[c].can_b});
                }
            }
        }
    }
    std::sort(result.matched_edges.begin(), result.matched_edges.end());
    std::sort(result.infeasible_vertices.begin(), result.infeasible_vertices.end());
    return result;
}

std::vector<int> extend_along_rays(const std::vector<int>& matched_edges,
                                   const std::vector<BadRayReport>& reps) {
    std::vector<int> out = matched_edges;
    std::sort(out.begin(), out.end());
    for (const auto& r : reps) {
        if (r.ray_edges.empty()) continue;
        bool root_matched = std::binary_search(out.begin(), out.end(), r.ray_edges[0]);
        std::size_t start = root_matched ? 2 : 1;
        for (std::size_t n = start; n < r.ray_edges.size(); n += 2) out.push_back(r.ray_edges[n]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

bool profile_ok(const FractionalMatching& f, const BadRayReport& report, int* increases) {
    const auto& g = f.graph();
    const std::int64_t den = f.denominator();
    for (int e : report.ray_edges) {
        std::int64_t w = f.weight_num(e);
        if (w <= 0 || w >= den)
            throw StructuralError("bad-ray report edge " + std::to_string(e) +
                                  " is not in the support");
    }
    // Even-position interior vertices (other than the root) must have
    // support degree 2 for the pairing to make sense.
    SupportSubgraph supp = f.support();
    auto sdeg = [&](int v) { return supp.degree(v); };
    for (std::size_t i = 2; i + 1 < report.ray.size(); i += 2) {
        int v = report.ray[i];
        if (!g.boundary(v) && sdeg(v) != 2) return false;
    }
    int inc = 0;
    for (std::size_t n = 0; 2 * n + 3 < report.ray.size(); ++n) {
        std::int64_t w0 = f.weight_num(report.ray_edges[2 * n]);
        std::int64_t w1 = f.weight_num(report.ray_edges[2 * n + 2]);
        int odd_vertex = report.ray[2 * n + 1];
        if (g.boundary(odd_vertex)) {
            if (w1 < w0) return false;  // still must be non-decreasing
            if (w1 > w0) inc++;
            continue;
        }
        int d = sdeg(odd_vertex);
        if (d == 2) {
            if (w1 != w0) return false;
        } else {
            if (w1 <= w0) return false;
            inc++;
        }
    }
    if (increases) *increases = inc;
    return true;
}

}  // namespace

bool weight_profile_check(const FractionalMatching& f, const BadRayReport& report) {
    return profile_ok(f, report, nullptr);
}

int count_strict_increases(const FractionalMatching& f, const BadRayReport& report) {
    int inc = 0;
    if (!profile_ok(f, report, &inc))
        throw InvariantViolation("weight profile violates the bad-ray law");
    return inc;
}

}  // namespace graphfactor
