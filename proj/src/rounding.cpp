#include "graphfactor/rounding.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "graphfactor/generators.hpp"

namespace graphfactor {

namespace {

// Sign of the weight change at position p when the designated edge moves
// in the requested direction.
int sign_at(const CycleUpdate& u, std::size_t p) {
    int base = ((static_cast<int>(p) - u.star_pos) % 2 + 2) % 2 == 0 ? 1 : -1;
    return u.direction == Direction::Increase ? base : -base;
}

void check_cycle_shape(const BipartiteMultigraph& g, const CycleUpdate& u) {
    const auto& ids = u.edge_ids;
    if (ids.size() < 2 || ids.size() % 2 != 0)
        throw StructuralError("cycle must have even length >= 2");
    // Consecutive edges must chain through shared endpoints and the walk
    // must close up without repeating vertices.
    std::unordered_set<int> seen;
    int entry = -1;
    {
        // Orient the walk: the vertex shared by the last and first edge.
        const auto& e0 = g.edge(ids[0]);
        const auto& el = g.edge(ids.back());
        if (e0.left == el.left || e0.left == el.right)
            entry = e0.left;
        else if (e0.right == el.left || e0.right == el.right)
            entry = e0.right;
        else
            throw StructuralError("cycle does not close");
    }
    int at = entry;
    for (int id : ids) {
        const auto& e = g.edge(id);
        if (e.left != at && e.right != at) throw StructuralError("cycle edges do not chain");
        if (!seen.insert(at).second) throw StructuralError("cycle revisits a vertex");
        at = g.other_endpoint(id, at);
    }
    if (at != entry) throw StructuralError("cycle does not close");
}

}  // namespace

namespace detail {

void apply_cycle_update_inplace(FractionalMatching& f, const CycleUpdate& u) {
    const auto& g = f.graph();
    check_cycle_shape(g, u);
    if (u.step < 1) throw StructuralError("step must be >= 1");
    for (int id : u.edge_ids) {
        std::int64_t w = f.weight_num(id);
        if (w <= 0 || w >= f.denominator())
            throw StructuralError("cycle edge " + std::to_string(id) + " not in the support");
    }
    for (std::size_t p = 0; p < u.edge_ids.size(); ++p) {
        std::int64_t w = f.weight_num(u.edge_ids[p]) + sign_at(u, p) * u.step;
        if (w < 0 || w > f.denominator())
            throw InvariantViolation("step leaves [0,1] on edge " +
                                     std::to_string(u.edge_ids[p]));
    }
    for (std::size_t p = 0; p < u.edge_ids.size(); ++p)
        f.set_weight_num(u.edge_ids[p], f.weight_num(u.edge_ids[p]) + sign_at(u, p) * u.step);
}

}  // namespace detail

FractionalMatching apply_cycle_update(const FractionalMatching& f, const CycleUpdate& u) {
    FractionalMatching out = f;
    detail::apply_cycle_update_inplace(out, u);
    return out;
}

namespace detail {

std::optional<CycleUpdate> find_cycle_in(const FractionalMatching& f,
                                         const std::function<bool(int)>& allowed,
                                         std::size_t scan_offset,
                                         const std::vector<int>* candidates) {
    const auto& g = f.graph();
    // Support adjacency restricted to allowed vertices.
    std::unordered_map<int, std::vector<int>> adj;  // vertex id -> incident support edge ids
    std::vector<int> order;
    auto consider = [&](int vid) {
        if (!allowed(vid)) return;
        std::vector<int> inc;
        for (int e : g.incident(vid)) {
            std::int64_t w = f.weight_num(e);
            if (w <= 0 || w >= f.denominator()) continue;
            int o = g.other_endpoint(e, vid);
            if (!allowed(o)) continue;
            inc.push_back(e);
        }
        if (inc.size() >= 2) {  // a vertex of degree <= 1 is on no cycle
            adj.emplace(vid, std::move(inc));
            order.push_back(vid);
        }
    };
    if (candidates) {
        for (int vid : *candidates) consider(vid);
    } else {
        for (const auto& v : g.vertices()) consider(v.id);
    }
    if (order.empty()) return std::nullopt;
    std::sort(order.begin(), order.end());

    // Peel degree <= 1 vertices to the 2-core.
    std::unordered_map<int, int> deg;
    for (const auto& [v, inc] : adj) {
        int d = 0;
        for (int e : inc) {
            int o = g.other_endpoint(e, v);
            if (adj.count(o)) d++;
        }
        deg[v] = d;
    }
    std::vector<int> peel;
    for (const auto& [v, d] : deg)
        if (d <= 1) peel.push_back(v);
    std::unordered_set<int> removed;
    while (!peel.empty()) {
        int v = peel.back();
        peel.pop_back();
        if (removed.count(v)) continue;
        removed.insert(v);
        for (int e : adj.at(v)) {
            int o = g.other_endpoint(e, v);
            if (!adj.count(o) || removed.count(o)) continue;
            if (--deg[o] <= 1) peel.push_back(o);
        }
    }

    // DFS from the first surviving vertex (rotated by scan_offset); the
    // first back edge closes a cycle.
    int start = -1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        int v = order[(i + scan_offset) % order.size()];
        if (!removed.count(v)) {
            start = v;
            break;
        }
    }
    if (start < 0) return std::nullopt;

    std::unordered_map<int, std::pair<int, int>> parent;  // vertex -> (parent vertex, edge)
    std::unordered_set<int> visited{start};
    std::vector<int> stack{start};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int e : adj.at(v)) {
            int o = g.other_endpoint(e, v);
            if (!adj.count(o) || removed.count(o)) continue;
            if (parent.count(v) && parent[v].second == e) continue;
            if (visited.count(o)) {
                // Found a cycle: v ... up to the common ancestor ... o.
                std::vector<int> chain_v;
                int a = v;
                std::unordered_map<int, int> pos_v;
                while (true) {
                    pos_v[a] = static_cast<int>(chain_v.size());
                    if (!parent.count(a)) break;
                    chain_v.push_back(parent[a].second);
                    a = parent[a].first;
                }
                std::vector<int> up_o;
                int b = o;
                while (!pos_v.count(b)) {
                    up_o.push_back(parent.at(b).second);
                    b = parent.at(b).first;
                }
                // cycle: v -> ... -> b (ancestor), then b -> ... -> o, then edge e back to v.
                std::vector<int> cyc(chain_v.begin(), chain_v.begin() + pos_v[b]);
                std::reverse(up_o.begin(), up_o.end());
                cyc.insert(cyc.end(), up_o.begin(), up_o.end());
                cyc.push_back(e);
                CycleUpdate u;
                u.edge_ids = std::move(cyc);
                auto star = std::min_element(u.edge_ids.begin(), u.edge_ids.end());
                u.star_pos = static_cast<int>(star - u.edge_ids.begin());
                u.direction = Direction::Decrease;
                // Largest saturating step.
                std::int64_t t = f.denominator();
                for (std::size_t p = 0; p < u.edge_ids.size(); ++p) {
                    std::int64_t w = f.weight_num(u.edge_ids[p]);
                    std::int64_t room = sign_at(u, p) > 0 ? f.denominator() - w : w;
                    t = std::min(t, room);
                }
                u.step = t;
                return u;
            }
            visited.insert(o);
            parent[o] = {v, e};
            stack.push_back(o);
        }
    }
    // Unreachable: every component surviving the peel has minimum degree
    // 2 and so contains a cycle the DFS must close.
    throw InvariantViolation("2-core DFS found no cycle");
}

}  // namespace detail

std::optional<CycleUpdate> find_support_cycle(const FractionalMatching& f) {
    const auto& g = f.graph();
    return detail::find_cycle_in(f, [&](int v) { return !g.boundary(v); });
}

FractionalMatching round_to_acyclic(const FractionalMatching& f, std::vector<TraceEntry>* trace) {
    FractionalMatching cur = f;
    int round = 0;
    while (auto u = find_support_cycle(cur)) {
        detail::apply_cycle_update_inplace(cur, *u);
        if (trace) {
            TraceEntry t;
            t.round = round;
            t.cycle = u->edge_ids;
            t.direction = u->direction;
            t.support_size = static_cast<std::int64_t>(cur.support().edge_ids.size());
            trace->push_back(std::move(t));
        }
        ++round;
    }
    return cur;
}

FractionalMatching sigma_round(const FractionalMatching& f, const std::vector<SigmaStep>& sigma,
                               int steps, std::vector<TraceEntry>* trace) {
    if (steps > static_cast<int>(sigma.size()))
        throw StructuralError("sigma shorter than the number of rounds");
    const auto& g = f.graph();
    FractionalMatching cur = f;
    for (int round = 0; round < steps; ++round) {
        const SigmaStep& s = sigma[round];
        // Greedy maximal vertex-disjoint family of support cycles, scan
        // rotated by the round's color.
        std::unordered_set<int> used;
        bool any = true;
        std::vector<CycleUpdate> family;
        while (any) {
            any = false;
            auto allowed = [&](int v) { return !g.boundary(v) && !used.count(v); };
            auto u = detail::find_cycle_in(cur, allowed, s.color);
            if (u) {
                any = true;
                u->direction = s.bit ? Direction::Decrease : Direction::Increase;
                u->step = 1;
                for (int e : u->edge_ids) {
                    used.insert(g.edge(e).left);
                    used.insert(g.edge(e).right);
                }
                family.push_back(std::move(*u));
            }
        }
        for (const auto& u : family) {
            detail::apply_cycle_update_inplace(cur, u);
            if (trace) {
                TraceEntry t;
                t.round = round;
                t.cycle = u.edge_ids;
                t.direction = u.direction;
                t.support_size = static_cast<std::int64_t>(cur.support().edge_ids.size());
                trace->push_back(std::move(t));
            }
        }
    }
    return cur;
}

std::vector<SigmaStep> random_sigma(std::uint64_t seed, int steps, std::uint32_t colors) {
    Rng rng(seed);
    std::vector<SigmaStep> sigma(steps);
    for (auto& s : sigma) {
        s.color = static_cast<std::uint32_t>(rng.below(colors == 0 ? 1 : colors));
        s.bit = rng.below(2) == 1;
    }
    return sigma;
}

namespace detail {

std::vector<std::vector<int>> path_like_components(const FractionalMatching& f) {
    const auto& g = f.graph();
    SupportSubgraph supp = f.support();
    std::unordered_set<int> in_support_vertex;
    for (int e : supp.edge_ids) {
        in_support_vertex.insert(g.edge(e).left);
        in_support_vertex.insert(g.edge(e).right);
    }
    std::unordered_set<int> seen;
    std::vector<std::vector<int>> out;
    for (int root : supp.edge_ids) {
        int rv = g.edge(root).left;
        if (seen.count(rv)) continue;
        // BFS over the support component.
        std::vector<int> comp_vertices{rv};
        std::vector<int> comp_edges;
        seen.insert(rv);
        std::vector<int> queue{rv};
        while (!queue.empty()) {
            int v = queue.back();
            queue.pop_back();
            for (int e : g.incident(v)) {
                if (!supp.contains(e)) continue;
                comp_edges.push_back(e);
                int o = g.other_endpoint(e, v);
                if (!seen.count(o)) {
                    seen.insert(o);
                    comp_vertices.push_back(o);
                    queue.push_back(o);
                }
            }
        }
        std::sort(comp_edges.begin(), comp_edges.end());
        comp_edges.erase(std::unique(comp_edges.begin(), comp_edges.end()), comp_edges.end());
        bool path_like = true;
        for (int v : comp_vertices)
            if (!g.boundary(v) && supp.degree(v) > 2) {
                path_like = false;
                break;
            }
        if (path_like) out.push_back(std::move(comp_edges));
    }
    return out;
}

}  // namespace detail

FractionalMatching resolve_path_components(const FractionalMatching& f, DenominatorParity parity) {
    if (f.target() != 1)
        throw UnsupportedParameters("path resolution applies to fractional perfect matchings");
    FractionalMatching cur = f;
    if (parity == DenominatorParity::Even && cur.denominator() % 2 != 0)
        cur = cur.regrid(2 * cur.denominator());
    const std::int64_t den = cur.denominator();
    auto comps = detail::path_like_components(cur);
    for (const auto& comp : comps) {
        for (int e : comp) {
            std::int64_t w = cur.weight_num(e);
            if (parity == DenominatorParity::Odd) {
                if (2 * w == den)
                    throw InvariantViolation("path weight exactly 1/2 on an odd grid");
                cur.set_weight_num(e, 2 * w < den ? 0 : den);
            } else {
                cur.set_weight_num(e, den / 2);
            }
        }
    }
    return cur;
}

}  // namespace graphfactor
