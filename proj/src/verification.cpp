#include "graphfactor/verification.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace graphfactor {

namespace {

template <typename F>
void parallel_for(int n, int jobs, F f) {
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> threads;
    int workers = std::min(jobs, n);
    threads.reserve(workers);
    for (int t = 0; t < workers; ++t)
        threads.emplace_back([&] {
            int i;
            while ((i = next.fetch_add(1)) < n) f(i);
        });
    for (auto& th : threads) th.join();
}

}  // namespace

bool verify_factor(const BipartiteMultigraph& g, const std::vector<int>& edge_ids, int k) {
    std::vector<int> deg(g.vertex_count(), 0);
    for (int id : edge_ids) {
        if (!g.has_edge(id)) throw StructuralError("factor edge " + std::to_string(id) +
                                                   " is not in the graph");
        const auto& e = g.edge(id);
        deg[g.vertex_index(e.left)]++;
        deg[g.vertex_index(e.right)]++;
    }
    for (const auto& v : g.vertices())
        if (!v.boundary && deg[g.vertex_index(v.id)] != k) return false;
    return true;
}

namespace {

void enumerate_rec(const BipartiteMultigraph& g, int k, std::size_t i, std::vector<int>& sel,
                   std::vector<int>& sel_deg, std::vector<int>& rem_inc, std::int64_t& count,
                   std::vector<std::vector<int>>* factors) {
    const auto& edges = g.edges();
    if (i == edges.size()) {
        for (const auto& v : g.vertices())
            if (sel_deg[g.vertex_index(v.id)] != k) return;
        count++;
        if (factors) factors->push_back(sel);
        return;
    }
    const auto& e = edges[i];
    int li = g.vertex_index(e.left), ri = g.vertex_index(e.right);
    rem_inc[li]--;
    rem_inc[ri]--;
    // Include edge i.
    if (sel_deg[li] < k && sel_deg[ri] < k) {
        sel_deg[li]++;
        sel_deg[ri]++;
        sel.push_back(e.id);
        enumerate_rec(g, k, i + 1, sel, sel_deg, rem_inc, count, factors);
        sel.pop_back();
        sel_deg[li]--;
        sel_deg[ri]--;
    }
    // Exclude edge i: both endpoints must still be completable.
    if (sel_deg[li] + rem_inc[li] >= k && sel_deg[ri] + rem_inc[ri] >= k)
        enumerate_rec(g, k, i + 1, sel, sel_deg, rem_inc, count, factors);
    rem_inc[li]++;
    rem_inc[ri]++;
}

}  // namespace

std::int64_t enumerate_k_factors(const BipartiteMultigraph& g, int k,
                                 std::vector<std::vector<int>>* factors, int guard) {
    if (g.edge_count() > guard)
        throw RefusalError("graph has " + std::to_string(g.edge_count()) +
                           " edges; brute-force guard is " + std::to_string(guard));
    std::vector<int> sel;
    std::vector<int> sel_deg(g.vertex_count(), 0);
    std::vector<int> rem_inc(g.vertex_count(), 0);
    for (const auto& v : g.vertices()) rem_inc[g.vertex_index(v.id)] = g.degree(v.id);
    std::int64_t count = 0;
    enumerate_rec(g, k, 0, sel, sel_deg, rem_inc, count, factors);
    return count;
}

namespace {

// Kuhn's augmenting-path perfect matching on the remaining edges.
std::vector<int> perfect_matching_augmenting(const BipartiteMultigraph& g,
                                             const std::vector<char>& removed) {
    std::vector<int> lefts, rights;
    for (const auto& v : g.vertices())
        (v.side == Side::Left ? lefts : rights).push_back(v.id);
    std::unordered_map<int, int> match_right;  // right vertex -> edge id
    std::unordered_map<int, int> match_left;   // left vertex -> edge id

    std::unordered_map<int, char> visited;
    std::function<bool(int)> try_augment = [&](int u) -> bool {
        for (int e : g.incident(u)) {
            if (removed[g.edge_index(e)]) continue;
            int v = g.edge(e).right;
            if (visited[v]) continue;
            visited[v] = 1;
            auto it = match_right.find(v);
            if (it == match_right.end() || try_augment(g.edge(it->second).left)) {
                match_right[v] = e;
                match_left[u] = e;
                return true;
            }
        }
        return false;
    };
    for (int u : lefts) {
        visited.clear();
        if (!try_augment(u))
            throw InvariantViolation("no perfect matching at vertex " + std::to_string(u));
    }
    std::vector<int> out;
    out.reserve(match_left.size());
    for (const auto& [u, e] : match_left) {
        (void)u;
        out.push_back(e);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<std::vector<int>> edge_color_regular_bipartite(const BipartiteMultigraph& g, int d) {
    if (!validate_regular_bipartite(g, d))
        throw StructuralError("graph is not " + std::to_string(d) + "-regular");
    std::vector<char> removed(g.edge_count(), 0);
    std::vector<std::vector<int>> classes;
    for (int round = 0; round < d; ++round) {
        std::vector<int> cls = perfect_matching_augmenting(g, removed);
        for (int e : cls) removed[g.edge_index(e)] = 1;
        classes.push_back(std::move(cls));
    }
    return classes;
}

std::vector<ResidualReport> window_residual_experiment(const OracleGraph& o,
                                                       const std::vector<int>& radii, int k,
                                                       int centers, std::uint64_t seed, int jobs) {
    if (k % 2 != 0 && o.degree() % 2 == 0)
        throw UnsupportedParameters("residual experiment needs |shifts| odd or k even");
    Rng rng(seed);
    std::vector<std::vector<int>> center_list;
    for (int c = 0; c < centers; ++c) {
        std::vector<int> p(o.dim);
        for (int a = 0; a < o.dim; ++a) p[a] = static_cast<int>(rng.below(401)) - 200;
        center_list.push_back(std::move(p));
    }
    struct Task {
        int radius;
        std::vector<int> center;
    };
    std::vector<Task> tasks;
    for (int r : radii)
        for (const auto& c : center_list) tasks.push_back({r, c});
    std::vector<ResidualReport> reports(tasks.size());
    parallel_for(static_cast<int>(tasks.size()), jobs, [&](int i) {
        const Task& t = tasks[i];
        Window w = make_window(o, t.center, t.radius);
        WindowFactorResult res = k_factor_window(w, k);
        std::int64_t interior = 0;
        for (const auto& v : w.graph->vertices())
            if (!v.boundary) interior++;
        ResidualReport rep;
        std::ostringstream id;
        id << "c(";
        for (std::size_t a = 0; a < t.center.size(); ++a)
            id << (a ? "," : "") << t.center[a];
        id << ")-r" << t.radius;
        rep.window_id = id.str();
        rep.radius = t.radius;
        rep.center = t.center;
        rep.interior = interior;
        rep.unresolved = static_cast<std::int64_t>(res.unresolved.size());
        rep.residual = interior == 0 ? Rational(1, 1) : Rational(rep.unresolved, interior);
        reports[i] = std::move(rep);
    });
    return reports;
}

namespace {

// Dense vertex id inside a window from the lattice point and side
// (construction enumerates points in lex order, Left before Right).
int window_vertex_id(const Window& w, const std::vector<int>& p, Side side) {
    long long rank = 0;
    for (int a = 0; a < w.oracle.dim; ++a) {
        if (p[a] < w.lo[a] || p[a] > w.hi[a]) return -1;
        rank = rank * (w.hi[a] - w.lo[a] + 1) + (p[a] - w.lo[a]);
    }
    return static_cast<int>(2 * rank + (side == Side::Right ? 1 : 0));
}

std::string edge_provenance_key(const Window& w, int edge_id) {
    const auto& e = w.graph->edge(edge_id);
    const auto& p = w.coords[w.graph->vertex_index(e.left)];
    std::ostringstream key;
    for (int c : p) key << c << ",";
    key << "s" << w.shift_index[w.graph->edge_index(edge_id)];
    return key.str();
}

// Per interior vertex: provenance key of its matching edge.
std::map<std::pair<std::vector<int>, int>, std::string> matched_map(const Window& w,
                                                                    const FactorSubgraph& m) {
    std::map<std::pair<std::vector<int>, int>, std::string> out;
    for (int e : m.edge_ids) {
        const auto& es = w.graph->edge(e);
        for (int vid : {es.left, es.right}) {
            if (w.graph->boundary(vid)) continue;
            const auto& p = w.coords[w.graph->vertex_index(vid)];
            int side = w.graph->vertex(vid).side == Side::Right ? 1 : 0;
            out[{p, side}] = edge_provenance_key(w, e);
        }
    }
    return out;
}

// Largest tile side guaranteed to have a contained tile in every window
// of the given extent (2S - 1 <= extent).
int largest_tile_side_within(long long extent) {
    long long s = 3;
    while (2 * (s * 2) - 1 <= extent) s *= 2;
    return static_cast<int>(s);
}

}  // namespace

std::vector<ParityStat> parity_obstruction_experiment(const OracleGraph& o,
                                                      const std::vector<int>& radii, int pairs,
                                                      std::uint64_t seed, int jobs) {
    struct PairTask {
        int radius;
        std::vector<int> center_a, center_b;
    };
    Rng rng(seed);
    std::vector<PairTask> tasks;
    for (int r : radii)
        for (int i = 0; i < pairs; ++i) {
            PairTask t;
            t.radius = r;
            t.center_a.resize(o.dim);
            t.center_b.resize(o.dim);
            for (int a = 0; a < o.dim; ++a) {
                t.center_a[a] = static_cast<int>(rng.below(401)) - 200;
                t.center_b[a] = t.center_a[a] + 1 + static_cast<int>(rng.below(4));
            }
            tasks.push_back(std::move(t));
        }
    struct PairOutcome {
        int radius = 0;
        std::int64_t components = 0, disagreeing = 0, compared = 0;
    };
    std::vector<PairOutcome> outcomes(tasks.size());
    parallel_for(static_cast<int>(tasks.size()), jobs, [&](int ti) {
        const PairTask& t = tasks[ti];
        Window wa = make_window(o, t.center_a, t.radius);
        Window wb = make_window(o, t.center_b, t.radius);
        auto solve = [&](const Window& w) {
            FractionalMatching f(w.graph, o.degree(), 1);
            for (const auto& e : w.graph->edges()) f.set_weight_num(e.id, 1);
            LemmaMainResult lm = lemma_main_window(w, f);
            return force_integral_paths(w, lm);
        };
        FactorSubgraph ma = solve(wa);
        FactorSubgraph mb = solve(wb);
        auto mapa = matched_map(wa, ma);
        auto mapb = matched_map(wb, mb);

        // Overlap box, deflated by the comparison margin.
        std::vector<int> olo(o.dim), ohi(o.dim);
        long long min_extent = std::numeric_limits<long long>::max();
        for (int a = 0; a < o.dim; ++a) {
            olo[a] = std::max(wa.lo[a], wb.lo[a]);
            ohi[a] = std::min(wa.hi[a], wb.hi[a]);
            min_extent = std::min<long long>(min_extent, ohi[a] - olo[a] + 1);
        }
        if (min_extent <= 0) return;
        int margin = largest_tile_side_within(2 * t.radius + 1) + 1;
        margin = std::min<long long>(margin, (min_extent - 1) / 2);
        margin = std::max(margin, 0);

        // Components of the overlap graph, by BFS over lattice points.
        std::map<std::pair<std::vector<int>, int>, int> comp;
        std::vector<std::vector<int>> points;
        {
            std::vector<int> p = olo;
            while (true) {
                points.push_back(p);
                int axis = o.dim - 1;
                while (axis >= 0 && p[axis] == ohi[axis]) {
                    p[axis] = olo[axis];
                    --axis;
                }
                if (axis < 0) break;
                p[axis]++;
            }
        }
        auto inside = [&](const std::vector<int>& p) {
            for (int a = 0; a < o.dim; ++a)
                if (p[a] < olo[a] || p[a] > ohi[a]) return false;
            return true;
        };
        int ncomp = 0;
        for (const auto& start : points) {
            for (int side = 0; side < 2; ++side) {
                if (comp.count({start, side})) continue;
                int id = ncomp++;
                std::vector<std::pair<std::vector<int>, int>> queue{{start, side}};
                comp[{start, side}] = id;
                while (!queue.empty()) {
                    auto [p, s] = queue.back();
                    queue.pop_back();
                    for (const auto& shift : o.shifts) {
                        std::vector<int> q = p;
                        for (int a = 0; a < o.dim; ++a) q[a] += (s == 0 ? shift[a] : -shift[a]);
                        if (!inside(q)) continue;
                        std::pair<std::vector<int>, int> nb{q, 1 - s};
                        if (!comp.count(nb)) {
                            comp[nb] = id;
                            queue.push_back(nb);
                        }
                    }
                }
            }
        }

        std::unordered_map<int, char> comp_seen, comp_bad;
        std::int64_t compared = 0;
        for (const auto& p : points) {
            bool deep = true;
            for (int a = 0; a < o.dim; ++a)
                if (p[a] < olo[a] + margin || p[a] > ohi[a] - margin) deep = false;
            if (!deep) continue;
            for (int side = 0; side < 2; ++side) {
                int ida = window_vertex_id(wa, p, side == 1 ? Side::Right : Side::Left);
                int idb = window_vertex_id(wb, p, side == 1 ? Side::Right : Side::Left);
                if (ida < 0 || idb < 0) continue;
                if (wa.graph->boundary(ida) || wb.graph->boundary(idb)) continue;
                int c = comp.at({p, side});
                comp_seen[c] = 1;
                auto ita = mapa.find({p, side});
                auto itb = mapb.find({p, side});
                if (ita == mapa.end() || itb == mapb.end()) continue;
                compared++;
                if (ita->second != itb->second) comp_bad[c] = 1;
            }
        }
        PairOutcome& res = outcomes[ti];
        res.radius = t.radius;
        res.components = static_cast<std::int64_t>(comp_seen.size());
        res.disagreeing = static_cast<std::int64_t>(comp_bad.size());
        res.compared = compared;
    });

    std::vector<ParityStat> stats;
    for (int r : radii) {
        ParityStat s;
        s.radius = r;
        for (const auto& oc : outcomes)
            if (oc.radius == r) {
                s.components += oc.components;
                s.disagreeing += oc.disagreeing;
                s.compared_vertices += oc.compared;
            }
        stats.push_back(s);
    }
    return stats;
}

std::string residual_csv(const std::vector<ResidualReport>& reports) {
    std::ostringstream out;
    out << "experiment,radius,center,interior,unresolved,residual_num,residual_den\n";
    for (const auto& r : reports) {
        out << "residual," << r.radius << ",\"" << r.window_id << "\"," << r.interior << ","
            << r.unresolved << "," << r.residual.num << "," << r.residual.den << "\n";
    }
    return out.str();
}

std::string parity_csv(const std::vector<ParityStat>& stats) {
    std::ostringstream out;
    out << "experiment,radius,center,interior,unresolved,residual_num,residual_den\n";
    for (const auto& s : stats) {
        Rational f = s.frequency();
        out << "parity," << s.radius << ",aggregate," << s.components << "," << s.disagreeing
            << "," << f.num << "," << f.den << "\n";
    }
    return out.str();
}

}  // namespace graphfactor
