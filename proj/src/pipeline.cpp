#include "graphfactor/pipeline.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace graphfactor {

namespace {

// Tile hierarchy: level l tiles have side 3*2^l and per-axis offset
// 3 * sum of 2^j over even j < l. Consecutive levels nest 2:1, and the
// offsets drift to a non-integer 2-adic limit, so no lattice hyperplane
// stays a tile seam at every level.
long long tile_side(int level) { return 3LL << level; }

long long tile_offset(int level) {
    long long off = 0;
    for (int j = 0; j < level; j += 2) off += 3LL << j;
    return off;
}

long long div_floor(long long a, long long b) {
    long long q = a / b, r = a % b;
    return r != 0 && ((r < 0) != (b < 0)) ? q - 1 : q;
}

struct TileBox {
    std::vector<long long> lo, hi;  // inclusive
    bool contains(const std::vector<int>& p) const {
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] < lo[i] || p[i] > hi[i]) return false;
        return true;
    }
};

enum class Status : char { Unsettled = 0, Matched = 1, Half = 2 };

class LemmaEngine {
  public:
    LemmaEngine(const FractionalMatching& f, const Window* win)
        : cur_(f), win_(win), g_(f.graph_ptr()) {
        if (f.target() != 1)
            throw UnsupportedParameters("lemma pipeline needs a fractional perfect matching (k=1)");
        if (!f.is_fractional_k_matching())
            throw InvariantViolation("input is not a valid fractional perfect matching");
        status_.assign(g_->vertex_count(), Status::Unsettled);
        matched_edge_.assign(g_->vertex_count(), -1);
        half_edge_.assign(g_->edge_count(), 0);
    }

    LemmaMainResult run();

  private:
    FractionalMatching cur_;
    const Window* win_;
    GraphPtr g_;
    std::vector<Status> status_;
    std::vector<int> matched_edge_;
    std::vector<char> half_edge_;
    std::vector<BadRayReport> reports_;

    bool unsettled(int vid) const { return status_[g_->vertex_index(vid)] == Status::Unsettled; }

    void mark_matched(int vid, int eid) {
        int idx = g_->vertex_index(vid);
        if (status_[idx] == Status::Matched) {
            if (matched_edge_[idx] == eid) return;
            if (!g_->boundary(vid))
                throw InvariantViolation("interior vertex matched twice: " + std::to_string(vid));
            return;  // boundary vertices have no sum guarantee
        }
        if (status_[idx] != Status::Unsettled)
            throw InvariantViolation("vertex settled twice: " + std::to_string(vid));
        status_[idx] = Status::Matched;
        matched_edge_[idx] = eid;
    }

    bool geometric_stub(int vid, const TileBox* box) const {
        if (!box) return g_->boundary(vid);
        const auto& v = g_->vertex(vid);
        const auto& p = win_->coords[g_->vertex_index(vid)];
        for (const auto& s : win_->oracle.shifts) {
            std::vector<int> nb = p;
            for (std::size_t i = 0; i < nb.size(); ++i)
                nb[i] += (v.side == Side::Left ? s[i] : -s[i]);
            if (!box->contains(nb)) return true;
        }
        return false;
    }

    void eliminate_cycles(const std::vector<char>& member, const std::vector<int>& ids) {
        auto allowed = [&](int vid) {
            int idx = g_->vertex_index(vid);
            if (!member[idx] || status_[idx] != Status::Unsettled) return false;
            if (!win_ && g_->boundary(vid)) return false;  // window discipline, no provenance
            return true;
        };
        const std::int64_t den = cur_.denominator();
        while (auto u = detail::find_cycle_in(cur_, allowed, 0, &ids)) {
            detail::apply_cycle_update_inplace(cur_, *u);
            for (int e : u->edge_ids)
                if (cur_.weight_num(e) == den) {
                    mark_matched(g_->edge(e).left, e);
                    mark_matched(g_->edge(e).right, e);
                }
        }
    }

    // Chain machinery: the unsettled support decomposes into maximal
    // degree-2 chains between "ends" (hubs of degree >= 3, window
    // boundary vertices, tile cuts, and degree-1 dead ends left by
    // earlier settlements). A chain is committed either "covering" from
    // one end (pairs (u1,u2),(u3,u4),... including that end) or
    // "sparing" both ends; interiors are covered either way, so chain
    // commitments never strand interior vertices. Hubs are matched on
    // the contracted hub forest; chains crossing the tile boundary are
    // deferred to a later level.
    enum class EndKind : char { Hub, Bdry, Cut, Dead };

    struct Chain {
        std::vector<int> verts;  // end a ... end b
        std::vector<int> edges;
        EndKind a, b;
    };

    struct LiveStructure {
        std::unordered_map<int, std::vector<int>> adj;  // live in-tile edges
        std::unordered_map<int, EndKind> role;          // ends only
        std::vector<Chain> chains;
    };

    bool live_edge(int eid, const std::vector<char>& member) const {
        const std::int64_t den = cur_.denominator();
        std::int64_t w = cur_.weight_num(eid);
        if (w <= 0 || w >= den) return false;
        const auto& e = g_->edge(eid);
        int li = g_->vertex_index(e.left), ri = g_->vertex_index(e.right);
        if (status_[li] != Status::Unsettled || status_[ri] != Status::Unsettled) return false;
        if (!member[li] || !member[ri]) return false;
        return true;
    }

    LiveStructure build_live(const std::vector<char>& member, const std::vector<int>& ids) {
        const std::int64_t den = cur_.denominator();
        LiveStructure ls;
        for (int vid : ids) {
            int idx = g_->vertex_index(vid);
            if (status_[idx] != Status::Unsettled) continue;
            std::vector<int> inc;
            bool crossing = false;
            for (int eid : g_->incident(vid)) {
                std::int64_t w = cur_.weight_num(eid);
                if (w <= 0 || w >= den) continue;
                int o = g_->other_endpoint(eid, vid);
                int oi = g_->vertex_index(o);
                if (status_[oi] != Status::Unsettled) continue;
                if (!member[oi]) {
                    crossing = true;
                    continue;
                }
                inc.push_back(eid);
            }
            if (inc.empty() && !crossing) continue;
            if (crossing)
                ls.role[vid] = EndKind::Cut;
            else if (g_->vertices()[idx].boundary)
                ls.role[vid] = EndKind::Bdry;
            else if (inc.size() == 1)
                ls.role[vid] = EndKind::Dead;
            else if (inc.size() >= 3)
                ls.role[vid] = EndKind::Hub;
            if (!inc.empty()) ls.adj.emplace(vid, std::move(inc));
        }
        // Chains: walk from every end through interior degree-2 vertices.
        std::unordered_set<int> visited_edges;
        for (const auto& [vid, kind] : ls.role) {
            auto it = ls.adj.find(vid);
            if (it == ls.adj.end()) continue;
            for (int start_edge : it->second) {
                if (visited_edges.count(start_edge)) continue;
                Chain c;
                c.a = kind;
                c.verts.push_back(vid);
                int prev_edge = -1;
                int at = vid;
                int eid = start_edge;
                while (true) {
                    visited_edges.insert(eid);
                    c.edges.push_back(eid);
                    at = g_->other_endpoint(eid, at);
                    c.verts.push_back(at);
                    auto rit = ls.role.find(at);
                    if (rit != ls.role.end()) {
                        c.b = rit->second;
                        break;
                    }
                    // interior degree-2 vertex: continue through it
                    prev_edge = eid;
                    eid = -1;
                    for (int e2 : ls.adj.at(at))
                        if (e2 != prev_edge) eid = e2;
                    if (eid < 0) {  // isolated open end without a role (should not happen)
                        c.b = EndKind::Dead;
                        break;
                    }
                }
                ls.chains.push_back(std::move(c));
            }
        }
        // Each chain was walked from both ends; dedupe by smallest edge.
        std::unordered_set<int> seen_min;
        std::vector<Chain> unique_chains;
        for (auto& c : ls.chains) {
            int mn = *std::min_element(c.edges.begin(), c.edges.end());
            if (seen_min.insert(mn).second) unique_chains.push_back(std::move(c));
        }
        ls.chains = std::move(unique_chains);
        return ls;
    }

    // Commit a chain: if cover_first, pairs (u0,u1),(u2,u3),... starting
    // at the chosen end; otherwise pairs (u1,u2),(u3,u4),... sparing it.
    // Interiors are covered either way.
    void expand_chain(const Chain& c, bool from_a, bool cover_first) {
        const std::int64_t den = cur_.denominator();
        std::vector<int> vs = c.verts;
        std::vector<int> es = c.edges;
        if (!from_a) {
            std::reverse(vs.begin(), vs.end());
            std::reverse(es.begin(), es.end());
        }
        std::size_t first = cover_first ? 0 : 1;
        for (std::size_t i = first; i + 1 < vs.size(); i += 2) {
            mark_matched(vs[i], es[i]);
            mark_matched(vs[i + 1], es[i]);
            cur_.set_weight_num(es[i], den);
        }
    }

    // Forced commitments (dead ends) plus hub matching on the contracted
    // forest; repeats until the region stabilizes. `allow_choices` runs
    // the hub matching (tile levels and finite graphs); the window
    // mop-up runs without it, so everything it commits is forced and
    // window-stable. With `final_pass`, leftover hub chains are also
    // committed sparing their unsettled hub ends.
    void dp_match(const std::vector<char>& member, const std::vector<int>& ids, bool allow_choices,
                  bool final_pass) {
        bool reported = false;
        while (true) {
            LiveStructure ls = build_live(member, ids);
            if (ls.chains.empty()) return;
            if (final_pass && !reported) {
                reported = true;
                for (const auto& c : ls.chains) {
                    bool hub_a = c.a == EndKind::Hub, hub_b = c.b == EndKind::Hub;
                    bool bdry_a = c.a == EndKind::Bdry, bdry_b = c.b == EndKind::Bdry;
                    if (!((hub_a && bdry_b) || (bdry_a && hub_b))) continue;
                    int hub = hub_a ? c.verts.front() : c.verts.back();
                    if (ls.adj.at(hub).size() != 3) continue;  // canonical representatives only
                    BadRayReport r;
                    r.ray = c.verts;
                    r.ray_edges = c.edges;
                    if (!hub_a) {
                        std::reverse(r.ray.begin(), r.ray.end());
                        std::reverse(r.ray_edges.begin(), r.ray_edges.end());
                    }
                    reports_.push_back(std::move(r));
                }
            }
            bool changed = false;
            // Forced: chains with a Dead end are covered from that end.
            for (const auto& c : ls.chains) {
                if (c.a == EndKind::Dead || c.b == EndKind::Dead) {
                    bool from_a = c.a == EndKind::Dead;
                    // Dead-Dead: cover from the smaller-id end.
                    if (c.a == EndKind::Dead && c.b == EndKind::Dead)
                        from_a = c.verts.front() < c.verts.back();
                    expand_chain(c, from_a, true);
                    changed = true;
                }
            }
            if (changed) continue;

            // Contracted hub forest: Hub-Hub chains are edges; chains from
            // a hub to a boundary vertex or a tile cut are optional
            // absorbers (committing through a cut continues as a forced
            // cascade on the far side at a later level). Each absorber
            // end becomes its own pseudo-leaf.
            std::vector<const Chain*> matchable;
            if (allow_choices)
                for (const auto& c : ls.chains) {
                    if (c.a != EndKind::Hub && c.b != EndKind::Hub) continue;
                    matchable.push_back(&c);
                }
            std::sort(matchable.begin(), matchable.end(), [](const Chain* x, const Chain* y) {
                return *std::min_element(x->edges.begin(), x->edges.end()) <
                       *std::min_element(y->edges.begin(), y->edges.end());
            });
            if (!matchable.empty()) {
                int pseudo = 0;
                for (const auto& v : g_->vertices()) pseudo = std::max(pseudo, v.id);
                pseudo++;
                struct CEdge {
                    int id;
                    int u, v;  // contracted endpoints (hub ids or pseudo leaves)
                    const Chain* chain;
                    bool hub_is_a;  // which chain end is the hub for absorbers
                };
                std::vector<CEdge> cedg;
                std::vector<int> stub_list;
                for (const Chain* c : matchable) {
                    int id = *std::min_element(c->edges.begin(), c->edges.end());
                    bool hub_a = c->a == EndKind::Hub;
                    bool hub_b = c->b == EndKind::Hub;
                    int u = c->verts.front(), v = c->verts.back();
                    if (!hub_a) {
                        u = pseudo++;
                        stub_list.push_back(u);
                    }
                    if (!hub_b) {
                        v = pseudo++;
                        stub_list.push_back(v);
                    }
                    cedg.push_back({id, u, v, c, hub_a});
                }
                // 2-color the contracted forest for the bipartite type.
                std::unordered_map<int, std::vector<std::pair<int, int>>> cadj;  // v -> (other, idx)
                for (std::size_t i = 0; i < cedg.size(); ++i) {
                    cadj[cedg[i].u].push_back({cedg[i].v, static_cast<int>(i)});
                    cadj[cedg[i].v].push_back({cedg[i].u, static_cast<int>(i)});
                }
                std::unordered_map<int, int> depth;
                for (const auto& [root, nbrs] : cadj) {
                    (void)nbrs;
                    if (depth.count(root)) continue;
                    depth[root] = 0;
                    std::vector<int> queue{root};
                    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
                        int v = queue[qi];
                        for (const auto& [o, ei] : cadj.at(v)) {
                            (void)ei;
                            if (!depth.count(o)) {
                                depth[o] = depth[v] + 1;
                                queue.push_back(o);
                            }
                        }
                    }
                }
                std::vector<VertexSpec> cverts;
                for (const auto& [v, nbrs] : cadj) {
                    (void)nbrs;
                    cverts.push_back({v, depth[v] % 2 == 0 ? Side::Left : Side::Right, false});
                }
                std::sort(cverts.begin(), cverts.end(),
                          [](const VertexSpec& x, const VertexSpec& y) { return x.id < y.id; });
                std::vector<EdgeSpec> cedges;
                std::unordered_map<int, const CEdge*> by_id;
                for (const auto& ce : cedg) {
                    int l = depth[ce.u] % 2 == 0 ? ce.u : ce.v;
                    int r = depth[ce.u] % 2 == 0 ? ce.v : ce.u;
                    cedges.push_back({ce.id, l, r});
                    by_id[ce.id] = &ce;
                }
                std::sort(cedges.begin(), cedges.end(),
                          [](const EdgeSpec& x, const EdgeSpec& y) { return x.id < y.id; });
                BoundariedForest contracted;
                contracted.graph =
                    std::make_shared<BipartiteMultigraph>(std::move(cverts), std::move(cedges));
                std::sort(stub_list.begin(), stub_list.end());
                contracted.stubs = std::move(stub_list);
                TreeMatchResult tm = match_leafless_forest(contracted, {}, nullptr);
                for (int id : tm.matched_edges) {
                    const CEdge* ce = by_id.at(id);
                    expand_chain(*ce->chain, ce->hub_is_a, true);  // cover the hub end onward
                    changed = true;
                }
            }
            if (changed) continue;

            if (!final_pass) return;
            // Mop-up: leftover hub chains are committed sparing their
            // unsettled hub ends; Bdry-Bdry chains go to the path stage.
            for (const auto& c : ls.chains) {
                if (c.a == EndKind::Bdry && c.b == EndKind::Bdry) continue;
                if (c.a == EndKind::Cut || c.b == EndKind::Cut) continue;  // none window-wide
                if (c.verts.size() < 3) continue;  // nothing between two adjacent hubs
                expand_chain(c, c.a == EndKind::Hub, false);
                changed = true;
            }
            if (!changed) return;
        }
    }

    // Support components among unsettled vertices whose interior vertices
    // all have degree <= 2: forced rounding (odd) or half values (even).
    void resolve_paths_engine() {
        const std::int64_t den = cur_.denominator();
        const bool odd = den % 2 != 0;
        std::vector<std::vector<int>> comp_edges;
        {
            std::vector<char> seen(g_->vertex_count(), 0);
            std::vector<int> sdeg(g_->vertex_count(), 0);
            std::vector<std::vector<int>> adj(g_->vertex_count());
            for (const auto& e : g_->edges()) {
                std::int64_t w = cur_.weight_num(e.id);
                if (w <= 0 || w >= den) continue;
                int li = g_->vertex_index(e.left), ri = g_->vertex_index(e.right);
                if (status_[li] != Status::Unsettled || status_[ri] != Status::Unsettled) continue;
                adj[li].push_back(e.id);
                adj[ri].push_back(e.id);
                sdeg[li]++;
                sdeg[ri]++;
            }
            for (int idx = 0; idx < g_->vertex_count(); ++idx) {
                if (seen[idx] || adj[idx].empty()) continue;
                std::vector<int> stackv{idx}, cedges;
                seen[idx] = 1;
                bool path_like = true;
                while (!stackv.empty()) {
                    int vi = stackv.back();
                    stackv.pop_back();
                    const auto& v = g_->vertices()[vi];
                    if (!v.boundary && sdeg[vi] > 2) path_like = false;
                    for (int e : adj[vi]) {
                        cedges.push_back(e);
                        int o = g_->other_endpoint(e, v.id);
                        int oi = g_->vertex_index(o);
                        if (!seen[oi]) {
                            seen[oi] = 1;
                            stackv.push_back(oi);
                        }
                    }
                }
                std::sort(cedges.begin(), cedges.end());
                cedges.erase(std::unique(cedges.begin(), cedges.end()), cedges.end());
                if (path_like) comp_edges.push_back(std::move(cedges));
            }
        }
        for (const auto& comp : comp_edges) {
            for (int e : comp) {
                std::int64_t w = cur_.weight_num(e);
                if (odd) {
                    if (2 * w == den) throw InvariantViolation("weight 1/2 on an odd grid");
                    if (2 * w < den) {
                        cur_.set_weight_num(e, 0);
                    } else {
                        cur_.set_weight_num(e, den);
                        mark_matched(g_->edge(e).left, e);
                        mark_matched(g_->edge(e).right, e);
                    }
                } else {
                    cur_.set_weight_num(e, den / 2);
                    half_edge_[g_->edge_index(e)] = 1;
                }
            }
            if (!odd) {
                for (int e : comp) {
                    for (int vid : {g_->edge(e).left, g_->edge(e).right}) {
                        int idx = g_->vertex_index(vid);
                        if (status_[idx] == Status::Unsettled) status_[idx] = Status::Half;
                    }
                }
            }
        }
    }

    void cleanup() {
        const std::int64_t den = cur_.denominator();
        std::vector<char> keep(g_->edge_count(), 0);
        for (int idx = 0; idx < g_->vertex_count(); ++idx)
            if (status_[idx] == Status::Matched) keep[g_->edge_index(matched_edge_[idx])] = 1;
        for (const auto& e : g_->edges()) {
            int ei = g_->edge_index(e.id);
            if (keep[ei] || half_edge_[ei]) continue;
            int li = g_->vertex_index(e.left), ri = g_->vertex_index(e.right);
            if (status_[li] != Status::Unsettled || status_[ri] != Status::Unsettled)
                cur_.set_weight_num(e.id, 0);
        }
        for (int idx = 0; idx < g_->vertex_count(); ++idx)
            if (status_[idx] == Status::Matched && cur_.weight_num(matched_edge_[idx]) != den)
                throw InvariantViolation("matched edge lost its weight");
    }

    struct Tile {
        std::vector<char> member;
        std::vector<int> ids;  // vertex ids, ascending
        TileBox box;
    };

    std::vector<Tile> tiles_at_level(int level) const {
        std::vector<Tile> out;
        const int m = win_->oracle.dim;
        const long long side = tile_side(level);
        const long long off = tile_offset(level);
        // Contained tile index ranges per axis.
        std::vector<long long> kmin(m), kmax(m);
        for (int a = 0; a < m; ++a) {
            long long lo = win_->lo[a], hi = win_->hi[a];
            kmin[a] = div_floor(lo - off + side - 1, side);
            kmax[a] = div_floor(hi - off + 1, side) - 1;
            if (kmin[a] > kmax[a]) return out;
        }
        // Group member vertices by tile index vector.
        std::map<std::vector<long long>, std::vector<int>> buckets;
        for (int idx = 0; idx < g_->vertex_count(); ++idx) {
            const auto& p = win_->coords[idx];
            std::vector<long long> key(m);
            bool inside = true;
            for (int a = 0; a < m; ++a) {
                key[a] = div_floor(p[a] - off, side);
                if (key[a] < kmin[a] || key[a] > kmax[a]) inside = false;
            }
            if (inside) buckets[key].push_back(idx);
        }
        for (const auto& [key, members] : buckets) {
            Tile t;
            t.box.lo.resize(m);
            t.box.hi.resize(m);
            for (int a = 0; a < m; ++a) {
                t.box.lo[a] = off + key[a] * side;
                t.box.hi[a] = t.box.lo[a] + side - 1;
            }
            t.member.assign(g_->vertex_count(), 0);
            for (int idx : members) {
                t.member[idx] = 1;
                t.ids.push_back(g_->vertices()[idx].id);
            }
            std::sort(t.ids.begin(), t.ids.end());
            out.push_back(std::move(t));
        }
        return out;
    }

    int level_count() const {
        if (!win_) return 1;
        long long extent = 0;
        for (int a = 0; a < win_->oracle.dim; ++a)
            extent = std::max(extent, static_cast<long long>(win_->hi[a] - win_->lo[a] + 1));
        int levels = 0;
        while (tile_side(levels) <= extent) levels++;
        return levels;
    }
};

LemmaMainResult LemmaEngine::run() {
    const std::int64_t den = cur_.denominator();
    const bool odd = den % 2 != 0;
    const int levels = level_count();

    std::vector<char> everyone(g_->vertex_count(), 1);
    std::vector<int> all_ids;
    for (const auto& v : g_->vertices()) all_ids.push_back(v.id);
    std::sort(all_ids.begin(), all_ids.end());

    if (!win_) {
        eliminate_cycles(everyone, all_ids);
        if (odd) {
            dp_match(everyone, all_ids, true, true);
            resolve_paths_engine();
        } else {
            resolve_paths_engine();
            dp_match(everyone, all_ids, true, true);
        }
    } else if (odd) {
        for (int l = 0; l < levels; ++l)
            for (auto& t : tiles_at_level(l)) {
                eliminate_cycles(t.member, t.ids);
                if (tile_side(l) >= kHubMatchMinSide) dp_match(t.member, t.ids, true, false);
            }
        dp_match(everyone, all_ids, false, true);
        resolve_paths_engine();
    } else {
        for (int l = 0; l < levels; ++l)
            for (auto& t : tiles_at_level(l)) eliminate_cycles(t.member, t.ids);
        resolve_paths_engine();
        for (int l = 0; l < levels; ++l)
            for (auto& t : tiles_at_level(l))
                if (tile_side(l) >= kHubMatchMinSide) dp_match(t.member, t.ids, true, false);
        dp_match(everyone, all_ids, false, true);
    }
    cleanup();

    LemmaMainResult out{cur_, {}, std::move(reports_)};
    for (const auto& v : g_->vertices()) {
        if (v.boundary) continue;
        int ones = 0, halves = 0, others = 0;
        for (int e : g_->incident(v.id)) {
            std::int64_t w = cur_.weight_num(e);
            if (w == 0) continue;
            if (w == den)
                ones++;
            else if (2 * w == den)
                halves++;
            else
                others++;
        }
        bool resolved = others == 0 && ((ones == 1 && halves == 0) || (ones == 0 && halves == 2));
        if (!resolved) out.unresolved.push_back(v.id);
    }
    std::sort(out.unresolved.begin(), out.unresolved.end());
    return out;
}

}  // namespace

LemmaMainResult lemma_main(const FractionalMatching& f) {
    LemmaEngine engine(f, nullptr);
    LemmaMainResult res = engine.run();
    bool has_boundary = false;
    for (const auto& v : f.graph().vertices())
        if (v.boundary) has_boundary = true;
    if (!has_boundary && !res.unresolved.empty())
        throw InvariantViolation("finite boundary-free graph left unresolved vertices");
    return res;
}

LemmaMainResult lemma_main_window(const Window& w, const FractionalMatching& f) {
    if (f.graph_ptr().get() != w.graph.get())
        throw StructuralError("matching does not live on the window's graph");
    LemmaEngine engine(f, &w);
    return engine.run();
}

TwoMatchingResult build_two_matching(const FractionalMatching& g_lvalued, int d) {
    const auto& g = g_lvalued.graph();
    const std::int64_t den = g_lvalued.denominator();
    if (d % 2 != 0 || d < 2) throw UnsupportedParameters("build_two_matching needs d even >= 2");
    FractionalMatching f2(g_lvalued.graph_ptr(), d - 1, 2);
    IncidentPartition part;
    part.parts.assign(g.vertex_count(), {});
    for (const auto& e : g.edges()) {
        std::int64_t w = g_lvalued.weight_num(e.id);
        std::int64_t out;
        if (w == 0)
            out = 1;  // 1/(d-1)
        else if (2 * w == den)
            out = d / 2;  // (d/2)/(d-1)
        else if (w == den)
            out = d - 1;  // 1
        else
            throw InvariantViolation("input is not {0,1/2,1}-valued on edge " +
                                     std::to_string(e.id));
        f2.set_weight_num(e.id, out);
    }
    for (const auto& v : g.vertices()) {
        std::vector<int> ones, halves, zeros;
        for (int e : g.incident(v.id)) {
            std::int64_t w = g_lvalued.weight_num(e);
            if (w == den)
                ones.push_back(e);
            else if (2 * w == den)
                halves.push_back(e);
            else if (w == 0)
                zeros.push_back(e);
        }
        auto& p = part.parts[g.vertex_index(v.id)];
        if (ones.size() == 1 && halves.empty() && static_cast<int>(zeros.size()) == d - 1) {
            p[0] = {ones[0]};
            p[1] = zeros;
        } else if (ones.empty() && halves.size() == 2 &&
                   static_cast<int>(zeros.size()) == d - 2) {
            p[0] = {halves[0]};
            p[1] = {halves[1]};
            for (std::size_t i = 0; i < zeros.size(); ++i)
                p[i < zeros.size() / 2 ? 0 : 1].push_back(zeros[i]);
        } else {
            throw InvariantViolation("vertex " + std::to_string(v.id) +
                                     " has no type-1 or type-2 pattern");
        }
        for (int side = 0; side < 2; ++side) {
            std::int64_t sum = 0;
            for (int e : p[side]) sum += f2.weight_num(e);
            if (sum != d - 1)
                throw InvariantViolation("partition part does not sum to 1 at vertex " +
                                         std::to_string(v.id));
        }
    }
    return {std::move(f2), std::move(part)};
}

SplitGraphResult split_graph(const FractionalMatching& f2, const IncidentPartition& partition) {
    const auto& g = f2.graph();
    const std::int64_t den = f2.denominator();
    // Validate the sum-to-1 invariant.
    for (const auto& v : g.vertices()) {
        const auto& p = partition.parts[g.vertex_index(v.id)];
        std::size_t total = p[0].size() + p[1].size();
        if (total != g.incident(v.id).size())
            throw StructuralError("partition does not cover the incident edges of vertex " +
                                  std::to_string(v.id));
        for (int side = 0; side < 2; ++side) {
            std::int64_t sum = 0;
            for (int e : p[side]) sum += f2.weight_num(e);
            if (sum != den)
                throw StructuralError("partition part does not sum to 1 at vertex " +
                                      std::to_string(v.id));
        }
    }
    auto part_of = [&](int vertex_id, int edge_id) {
        const auto& p = partition.parts[g.vertex_index(vertex_id)];
        for (int side = 0; side < 2; ++side)
            for (int e : p[side])
                if (e == edge_id) return side;
        throw StructuralError("edge " + std::to_string(edge_id) + " missing from partition of " +
                              std::to_string(vertex_id));
    };
    std::vector<VertexSpec> verts;
    std::vector<std::pair<int, int>> origin;
    for (const auto& v : g.vertices()) {
        int idx = g.vertex_index(v.id);
        for (int i = 0; i < 2; ++i) {
            verts.push_back({2 * idx + i, v.side, v.boundary});
            origin.push_back({v.id, i});
        }
    }
    std::vector<EdgeSpec> edges;
    for (const auto& e : g.edges()) {
        int iu = part_of(e.left, e.id), iv = part_of(e.right, e.id);
        edges.push_back({e.id, 2 * g.vertex_index(e.left) + iu, 2 * g.vertex_index(e.right) + iv});
    }
    auto graph = std::make_shared<BipartiteMultigraph>(std::move(verts), std::move(edges));
    FractionalMatching transported(graph, den, 1);
    for (const auto& e : g.edges()) transported.set_weight_num(e.id, f2.weight_num(e.id));
    if (!transported.is_fractional_k_matching())
        throw InvariantViolation("transported weights are not a fractional perfect matching");
    return {graph, std::move(transported), std::move(origin)};
}

FactorSubgraph two_factor(GraphPtr g, int d) {
    if (d % 2 != 0 || d < 2)
        throw UnsupportedParameters("two_factor needs d even >= 2; use the induction path");
    if (!validate_regular_bipartite(*g, d)) throw StructuralError("graph is not d-regular");
    for (const auto& v : g->vertices())
        if (v.boundary)
            throw UnsupportedParameters("two_factor supports finite boundary-free graphs only");
    FractionalMatching f = FractionalMatching::uniform_regular(g, d, 1);
    LemmaMainResult lm = lemma_main(f);
    TwoMatchingResult tm = build_two_matching(lm.g, d);
    SplitGraphResult sg = split_graph(tm.f2, tm.partition);
    if (sg.transported.denominator() % 2 == 0)
        throw InvariantViolation("split grid denominator must be odd");
    LemmaMainResult pm = lemma_main(sg.transported);
    const std::int64_t den = pm.g.denominator();
    FactorSubgraph out;
    out.graph = g;
    out.k = 2;
    for (const auto& e : sg.graph->edges())
        if (pm.g.weight_num(e.id) == den) out.edge_ids.push_back(e.id);
    std::sort(out.edge_ids.begin(), out.edge_ids.end());
    return out;
}

namespace {

FactorSubgraph all_edges_factor(GraphPtr g, int k) {
    FactorSubgraph out;
    out.graph = g;
    out.k = k;
    for (const auto& e : g->edges()) out.edge_ids.push_back(e.id);
    std::sort(out.edge_ids.begin(), out.edge_ids.end());
    return out;
}

}  // namespace

FactorSubgraph k_factor(GraphPtr g, int d, int k) {
    if (k < 0 || k > d) throw StructuralError("need 0 <= k <= d");
    if (!validate_regular_bipartite(*g, d)) throw StructuralError("graph is not d-regular");
    if (k % 2 != 0 && d % 2 == 0)
        throw UnsupportedParameters(
            "no k-factor construction: need d odd or k even (abstract's iff condition)");
    if (k == 0) return {g, {}, 0};
    if (k == d) return all_edges_factor(g, k);
    if (d % 2 != 0) {
        FractionalMatching f = FractionalMatching::uniform_regular(g, d, 1);
        LemmaMainResult lm = lemma_main(f);
        const std::int64_t den = lm.g.denominator();
        FactorSubgraph m;
        m.graph = g;
        m.k = 1;
        for (const auto& e : g->edges())
            if (lm.g.weight_num(e.id) == den) m.edge_ids.push_back(e.id);
        std::sort(m.edge_ids.begin(), m.edge_ids.end());
        auto rest = std::make_shared<BipartiteMultigraph>(subtract_factor(*g, m));
        if (k % 2 != 0) {
            FactorSubgraph sub = k_factor(rest, d - 1, k - 1);
            FactorSubgraph out;
            out.graph = g;
            out.k = k;
            out.edge_ids = m.edge_ids;
            out.edge_ids.insert(out.edge_ids.end(), sub.edge_ids.begin(), sub.edge_ids.end());
            std::sort(out.edge_ids.begin(), out.edge_ids.end());
            return out;
        }
        FactorSubgraph sub = k_factor(rest, d - 1, k);
        sub.graph = g;
        return sub;
    }
    FactorSubgraph h2 = two_factor(g, d);
    auto rest = std::make_shared<BipartiteMultigraph>(subtract_factor(*g, h2));
    FactorSubgraph sub = k_factor(rest, d - 2, k - 2);
    FactorSubgraph out;
    out.graph = g;
    out.k = k;
    out.edge_ids = h2.edge_ids;
    out.edge_ids.insert(out.edge_ids.end(), sub.edge_ids.begin(), sub.edge_ids.end());
    std::sort(out.edge_ids.begin(), out.edge_ids.end());
    return out;
}

Window window_without_edges(const Window& w, const std::vector<int>& edge_ids) {
    Window out = w;
    auto g2 = std::make_shared<BipartiteMultigraph>(w.graph->without_edges(edge_ids));
    std::vector<int> shifts;
    shifts.reserve(g2->edge_count());
    for (const auto& e : g2->edges()) shifts.push_back(w.shift_index[w.graph->edge_index(e.id)]);
    out.graph = g2;
    out.shift_index = std::move(shifts);
    return out;
}

Window window_with_boundary(const Window& w, const std::vector<int>& vertex_ids) {
    Window out = w;
    out.graph = std::make_shared<BipartiteMultigraph>(w.graph->with_boundary(vertex_ids));
    return out;
}

WindowFactorResult k_factor_window(const Window& w, int k) {
    const int d = w.oracle.degree();
    if (k < 0 || k > d) throw StructuralError("need 0 <= k <= d");
    if (k % 2 != 0 && d % 2 == 0)
        throw UnsupportedParameters(
            "no k-factor construction: need d odd or k even (abstract's iff condition)");

    WindowFactorResult out;
    out.factor.graph = w.graph;
    out.factor.k = k;

    Window cur = w;
    int cd = d, ck = k;
    std::vector<int> unresolved_all;
    while (true) {
        if (ck == 0) break;
        if (ck == cd) {
            for (const auto& e : cur.graph->edges()) out.factor.edge_ids.push_back(e.id);
            break;
        }
        if (cd % 2 == 0)
            throw UnsupportedParameters(
                "windowed k_factor reaches an even-degree layer with 0 < k < d; unsupported");
        FractionalMatching f(cur.graph, cd, 1);
        for (const auto& e : cur.graph->edges()) f.set_weight_num(e.id, 1);
        LemmaMainResult lm = lemma_main_window(cur, f);
        const std::int64_t den = lm.g.denominator();
        std::vector<int> m_edges;
        for (const auto& e : cur.graph->edges())
            if (lm.g.weight_num(e.id) == den) m_edges.push_back(e.id);
        for (int v : lm.unresolved) unresolved_all.push_back(v);
        if (ck % 2 != 0) {
            out.factor.edge_ids.insert(out.factor.edge_ids.end(), m_edges.begin(), m_edges.end());
            ck -= 1;
        }
        cur = window_without_edges(cur, m_edges);
        if (!lm.unresolved.empty()) cur = window_with_boundary(cur, lm.unresolved);
        cd -= 1;
    }
    std::sort(out.factor.edge_ids.begin(), out.factor.edge_ids.end());
    out.factor.edge_ids.erase(std::unique(out.factor.edge_ids.begin(), out.factor.edge_ids.end()),
                              out.factor.edge_ids.end());
    std::sort(unresolved_all.begin(), unresolved_all.end());
    unresolved_all.erase(std::unique(unresolved_all.begin(), unresolved_all.end()),
                         unresolved_all.end());
    out.unresolved = std::move(unresolved_all);
    return out;
}

FactorSubgraph force_integral_paths(const Window& w, const LemmaMainResult& lemma) {
    const auto& g = *w.graph;
    const FractionalMatching& f = lemma.g;
    const std::int64_t den = f.denominator();
    FactorSubgraph out;
    out.graph = w.graph;
    out.k = 1;
    for (const auto& e : g.edges())
        if (f.weight_num(e.id) == den) out.edge_ids.push_back(e.id);

    // Components of the half-valued edges (paths or even cycles).
    std::vector<char> seen(g.vertex_count(), 0);
    std::vector<std::vector<int>> adj(g.vertex_count());
    for (const auto& e : g.edges())
        if (2 * f.weight_num(e.id) == den) {
            adj[g.vertex_index(e.left)].push_back(e.id);
            adj[g.vertex_index(e.right)].push_back(e.id);
        }
    for (int idx = 0; idx < g.vertex_count(); ++idx) {
        if (seen[idx] || adj[idx].empty()) continue;
        // Collect the component and the minimal vertex (ids are in
        // absolute coordinate order within a window).
        std::vector<int> comp{idx};
        seen[idx] = 1;
        int anchor = idx;
        bool walkable = true;
        for (std::size_t qi = 0; qi < comp.size(); ++qi) {
            int vi = comp[qi];
            if (adj[vi].size() > 2) walkable = false;
            for (int e : adj[vi]) {
                int oi = g.vertex_index(g.other_endpoint(e, g.vertices()[vi].id));
                if (!seen[oi]) {
                    seen[oi] = 1;
                    comp.push_back(oi);
                    anchor = std::min(anchor, oi);
                }
            }
        }
        // Half components that branch at the boundary have no alternation
        // classes; leave them unresolved.
        if (!walkable) continue;
        // Walk the path (or even cycle) from its smallest endpoint if it
        // has one, assigning alternating classes along the walk.
        int start = -1;
        for (int vi : comp)
            if (adj[vi].size() == 1 && (start < 0 || vi < start)) start = vi;
        if (start < 0) start = anchor;
        std::unordered_set<int> cls0, cls1;
        int at = start;
        int prev_edge = -1;
        int pos = 0;
        while (true) {
            int next_edge = -1;
            for (int e : adj[at])
                if (e != prev_edge && !cls0.count(e) && !cls1.count(e))
                    next_edge = next_edge < 0 ? e : std::min(next_edge, e);
            if (next_edge < 0) break;
            (pos % 2 == 0 ? cls0 : cls1).insert(next_edge);
            pos++;
            prev_edge = next_edge;
            at = g.vertex_index(g.other_endpoint(next_edge, g.vertices()[at].id));
        }
        long long coord_sum = 0;
        for (int c : w.coords[anchor]) coord_sum += c;
        int want = static_cast<int>(((coord_sum % 2) + 2) % 2);
        for (int e : (want == 0 ? cls0 : cls1)) out.edge_ids.push_back(e);
    }
    std::sort(out.edge_ids.begin(), out.edge_ids.end());
    out.edge_ids.erase(std::unique(out.edge_ids.begin(), out.edge_ids.end()), out.edge_ids.end());
    return out;
}

}  // namespace graphfactor
