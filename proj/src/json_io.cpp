#include "graphfactor/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace graphfactor {

using nlohmann::json;

json graph_to_json(const BipartiteMultigraph& g) {
    json j;
    j["vertices"] = json::array();
    for (const auto& v : g.vertices()) {
        json jv{{"id", v.id}, {"side", v.side == Side::Left ? "L" : "R"}, {"boundary", v.boundary}};
        j["vertices"].push_back(jv);
    }
    j["edges"] = json::array();
    for (const auto& e : g.edges())
        j["edges"].push_back(json{{"id", e.id}, {"u", e.left}, {"v", e.right}});
    return j;
}

GraphPtr graph_from_json(const json& j) {
    if (!j.contains("vertices") || !j.contains("edges"))
        throw StructuralError("graph JSON needs 'vertices' and 'edges'");
    std::vector<VertexSpec> verts;
    for (const auto& jv : j.at("vertices")) {
        VertexSpec v;
        v.id = jv.at("id").get<int>();
        const std::string side = jv.at("side").get<std::string>();
        if (side == "L")
            v.side = Side::Left;
        else if (side == "R")
            v.side = Side::Right;
        else
            throw StructuralError("vertex side must be 'L' or 'R'");
        v.boundary = jv.value("boundary", false);
        verts.push_back(v);
    }
    std::vector<EdgeSpec> edges;
    for (const auto& je : j.at("edges"))
        edges.push_back({je.at("id").get<int>(), je.at("u").get<int>(), je.at("v").get<int>()});
    return std::make_shared<BipartiteMultigraph>(std::move(verts), std::move(edges));
}

json matching_to_json(const FractionalMatching& f) {
    json j = graph_to_json(f.graph());
    j["denominator"] = f.denominator();
    j["k"] = f.target();
    json w = json::object();
    for (const auto& e : f.graph().edges()) w[std::to_string(e.id)] = f.weight_num(e.id);
    j["weights"] = w;
    return j;
}

FractionalMatching matching_from_json(const json& j) {
    GraphPtr g = graph_from_json(j);
    FractionalMatching f(g, j.at("denominator").get<std::int64_t>(), j.at("k").get<int>());
    for (const auto& [key, val] : j.at("weights").items())
        f.set_weight_num(std::stoi(key), val.get<std::int64_t>());
    return f;
}

json factor_to_json(const FactorSubgraph& h) {
    return json{{"k", h.k}, {"edges", h.edge_ids}};
}

FactorSubgraph factor_from_json(const json& j, GraphPtr g) {
    FactorSubgraph h;
    h.graph = std::move(g);
    h.k = j.at("k").get<int>();
    h.edge_ids = j.at("edges").get<std::vector<int>>();
    std::sort(h.edge_ids.begin(), h.edge_ids.end());
    return h;
}

json forest_to_json(const BoundariedForest& f) {
    json j = graph_to_json(*f.graph);
    j["stubs"] = f.stubs;
    return j;
}

BoundariedForest forest_from_json(const json& j) {
    BoundariedForest f;
    f.graph = graph_from_json(j);
    if (j.contains("stubs")) f.stubs = j.at("stubs").get<std::vector<int>>();
    std::sort(f.stubs.begin(), f.stubs.end());
    for (int s : f.stubs)
        if (!f.graph->has_vertex(s)) throw StructuralError("stub refers to unknown vertex");
    return f;
}

json window_to_json(const Window& w) {
    json j = graph_to_json(*w.graph);
    for (std::size_t i = 0; i < w.coords.size(); ++i) j["vertices"][i]["coords"] = w.coords[i];
    for (std::size_t i = 0; i < w.shift_index.size(); ++i) j["edges"][i]["shift"] = w.shift_index[i];
    j["oracle"] = json{{"m", w.oracle.dim}, {"shifts", w.oracle.shifts}};
    j["center"] = w.center;
    j["radius"] = w.radius;
    return j;
}

std::string to_dot(const BipartiteMultigraph& g, const FractionalMatching* f) {
    std::ostringstream out;
    out << "graph G {\n";
    for (const auto& v : g.vertices()) {
        out << "  v" << v.id << " [label=\"" << v.id << "\" shape="
            << (v.side == Side::Left ? "circle" : "box");
        if (v.boundary) out << " style=dashed";
        out << "];\n";
    }
    for (const auto& e : g.edges()) {
        out << "  v" << e.left << " -- v" << e.right;
        if (f) {
            Rational r(f->weight_num(e.id), f->denominator());
            out << " [label=\"" << r.str() << "\"]";
        }
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw StructuralError("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace graphfactor
