#include "graphfactor/generators.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

namespace graphfactor {

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw StructuralError("Rng::below(0)");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = eng_();
    } while (x >= limit);
    return x % n;
}

GraphPtr gen_random_regular_bipartite(int n, int d, std::uint64_t seed) {
    if (n < 1) throw StructuralError("n must be >= 1");
    if (d < 0) throw StructuralError("d must be >= 0");
    std::vector<VertexSpec> verts;
    verts.reserve(2 * n);
    for (int i = 0; i < n; ++i) verts.push_back({i, Side::Left, false});
    for (int i = 0; i < n; ++i) verts.push_back({n + i, Side::Right, false});
    Rng rng(seed);
    std::vector<EdgeSpec> edges;
    edges.reserve(static_cast<std::size_t>(n) * d);
    std::vector<int> perm(n);
    int next_edge = 0;
    for (int round = 0; round < d; ++round) {
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        for (int i = 0; i < n; ++i) edges.push_back({next_edge++, i, n + perm[i]});
    }
    return std::make_shared<BipartiteMultigraph>(std::move(verts), std::move(edges));
}

OracleGraph gen_oracle(int m, std::vector<std::vector<int>> shifts) {
    if (shifts.empty()) throw StructuralError("shift list must be non-empty");
    for (const auto& s : shifts)
        if (static_cast<int>(s.size()) != m)
            throw StructuralError("shift dimension mismatch");
    return OracleGraph{m, std::move(shifts)};
}

bool Window::in_box(const std::vector<int>& p) const {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
}

namespace {

void add_vec(std::vector<int>& p, const std::vector<int>& s, int sign) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += sign * s[i];
}

}  // namespace

Window make_window(const OracleGraph& o, const std::vector<int>& center, int radius) {
    if (radius < 1) throw StructuralError("radius must be >= 1");
    if (static_cast<int>(center.size()) != o.dim) throw StructuralError("center dimension mismatch");
    Window w;
    w.oracle = o;
    w.center = center;
    w.radius = radius;
    w.lo.resize(o.dim);
    w.hi.resize(o.dim);
    for (int i = 0; i < o.dim; ++i) {
        w.lo[i] = center[i] - radius;
        w.hi[i] = center[i] + radius;
    }
    // Enumerate box points in lex order.
    std::vector<std::vector<int>> points;
    std::vector<int> p = w.lo;
    while (true) {
        points.push_back(p);
        int axis = o.dim - 1;
        while (axis >= 0 && p[axis] == w.hi[axis]) {
            p[axis] = w.lo[axis];
            --axis;
        }
        if (axis < 0) break;
        p[axis]++;
    }
    std::map<std::vector<int>, int> point_index;
    for (std::size_t i = 0; i < points.size(); ++i) point_index[points[i]] = static_cast<int>(i);

    std::vector<VertexSpec> verts;
    std::vector<std::vector<int>> coords;
    verts.reserve(points.size() * 2);
    // id order: (point lex, Left < Right)
    auto vid = [&](int pidx, Side s) { return 2 * pidx + (s == Side::Right ? 1 : 0); };
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& q = points[i];
        bool left_boundary = false, right_boundary = false;
        for (const auto& s : o.shifts) {
            std::vector<int> nb = q;
            add_vec(nb, s, +1);
            if (!w.in_box(nb)) left_boundary = true;
            nb = q;
            add_vec(nb, s, -1);
            if (!w.in_box(nb)) right_boundary = true;
        }
        verts.push_back({vid(static_cast<int>(i), Side::Left), Side::Left, left_boundary});
        verts.push_back({vid(static_cast<int>(i), Side::Right), Side::Right, right_boundary});
        coords.push_back(q);
        coords.push_back(q);
    }
    std::vector<EdgeSpec> edges;
    std::vector<int> shift_index;
    int next_edge = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t si = 0; si < o.shifts.size(); ++si) {
            std::vector<int> nb = points[i];
            add_vec(nb, o.shifts[si], +1);
            auto it = point_index.find(nb);
            if (it == point_index.end()) continue;
            edges.push_back({next_edge++, vid(static_cast<int>(i), Side::Left),
                             vid(it->second, Side::Right)});
            shift_index.push_back(static_cast<int>(si));
        }
    }
    w.graph = std::make_shared<BipartiteMultigraph>(std::move(verts), std::move(edges));
    w.coords = std::move(coords);
    w.shift_index = std::move(shift_index);
    return w;
}

GraphPtr make_torus(const OracleGraph& o, int length) {
    if (length < 1) throw StructuralError("torus length must be >= 1");
    std::vector<std::vector<int>> points;
    std::vector<int> p(o.dim, 0);
    while (true) {
        points.push_back(p);
        int axis = o.dim - 1;
        while (axis >= 0 && p[axis] == length - 1) {
            p[axis] = 0;
            --axis;
        }
        if (axis < 0) break;
        p[axis]++;
    }
    std::map<std::vector<int>, int> point_index;
    for (std::size_t i = 0; i < points.size(); ++i) point_index[points[i]] = static_cast<int>(i);
    std::vector<VertexSpec> verts;
    for (std::size_t i = 0; i < points.size(); ++i) {
        verts.push_back({static_cast<int>(2 * i), Side::Left, false});
        verts.push_back({static_cast<int>(2 * i + 1), Side::Right, false});
    }
    std::vector<EdgeSpec> edges;
    int next_edge = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (const auto& s : o.shifts) {
            std::vector<int> nb = points[i];
            for (int a = 0; a < o.dim; ++a) nb[a] = ((nb[a] + s[a]) % length + length) % length;
            int j = point_index.at(nb);
            edges.push_back({next_edge++, static_cast<int>(2 * i), 2 * j + 1});
        }
    }
    return std::make_shared<BipartiteMultigraph>(std::move(verts), std::move(edges));
}

bool BoundariedForest::is_stub(int vertex_id) const {
    return std::binary_search(stubs.begin(), stubs.end(), vertex_id);
}

namespace {

// Assign sides by depth parity so every tree edge crosses sides.
BoundariedForest finish_forest(const std::vector<std::pair<int, int>>& tree_edges, int n,
                               std::vector<int> stubs) {
    std::vector<std::vector<int>> adj(n);
    for (const auto& [a, b] : tree_edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<int> depth(n, -1);
    for (int root = 0; root < n; ++root) {
        if (depth[root] >= 0) continue;
        depth[root] = 0;
        std::vector<int> stack{root};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int u : adj[v])
                if (depth[u] < 0) {
                    depth[u] = depth[v] + 1;
                    stack.push_back(u);
                }
        }
    }
    std::vector<VertexSpec> verts;
    std::sort(stubs.begin(), stubs.end());
    for (int i = 0; i < n; ++i) {
        bool stub = std::binary_search(stubs.begin(), stubs.end(), i);
        verts.push_back({i, depth[i] % 2 == 0 ? Side::Left : Side::Right, stub});
    }
    std::vector<EdgeSpec> edges;
    int next_edge = 0;
    for (const auto& [a, b] : tree_edges) {
        int l = depth[a] % 2 == 0 ? a : b;
        int r = depth[a] % 2 == 0 ? b : a;
        edges.push_back({next_edge++, l, r});
    }
    BoundariedForest f;
    f.graph = std::make_shared<BipartiteMultigraph>(std::move(verts), std::move(edges));
    f.stubs = std::move(stubs);
    return f;
}

}  // namespace

BoundariedForest gen_boundaried_forest(const ForestSpec& spec, std::uint64_t seed) {
    std::vector<std::pair<int, int>> edges;
    std::vector<int> stubs;
    switch (spec.kind) {
        case ForestKind::Spider: {
            if (spec.rays < 1 || spec.ray_length < 1)
                throw StructuralError("spider needs rays >= 1 and ray_length >= 1");
            int next = 1;  // 0 is the root
            for (int r = 0; r < spec.rays; ++r) {
                int prev = 0;
                for (int i = 0; i < spec.ray_length; ++i) {
                    edges.push_back({prev, next});
                    prev = next++;
                }
                stubs.push_back(prev);
            }
            return finish_forest(edges, next, std::move(stubs));
        }
        case ForestKind::Path: {
            if (spec.length < 2) throw StructuralError("path needs length >= 2");
            for (int i = 0; i + 1 < spec.length; ++i) edges.push_back({i, i + 1});
            stubs = {0, spec.length - 1};
            return finish_forest(edges, spec.length, std::move(stubs));
        }
        case ForestKind::RandomLeafless: {
            if (spec.vertices < 2) throw StructuralError("random forest needs >= 2 vertices");
            Rng rng(seed);
            for (int v = 1; v < spec.vertices; ++v)
                edges.push_back({static_cast<int>(rng.below(v)), v});
            std::vector<int> deg(spec.vertices, 0);
            for (const auto& [a, b] : edges) {
                deg[a]++;
                deg[b]++;
            }
            for (int v = 0; v < spec.vertices; ++v)
                if (deg[v] == 1) stubs.push_back(v);
            return finish_forest(edges, spec.vertices, std::move(stubs));
        }
    }
    throw StructuralError("unknown forest kind");
}

}  // namespace graphfactor
