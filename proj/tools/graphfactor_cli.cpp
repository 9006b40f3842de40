// graphfactor: generators, rounding, tree matching, factor pipeline,
// verification and window experiments behind one command line.
//
// Exit codes: 0 success, 1 structural/IO errors, 2 unsupported parameter
// combinations (d even with k odd). Summaries are single-line JSON on
// stdout; human-readable detail goes to stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "graphfactor/general_graph.hpp"
#include "graphfactor/generators.hpp"
#include "graphfactor/json_io.hpp"
#include "graphfactor/pipeline.hpp"
#include "graphfactor/rounding.hpp"
#include "graphfactor/tree_matching.hpp"
#include "graphfactor/verification.hpp"

using namespace graphfactor;
using nlohmann::json;

namespace {

void emit(const json& summary) { std::cout << summary.dump() << "\n"; }

int default_jobs() {
    if (const char* env = std::getenv("GRAPHFACTOR_JOBS")) {
        int j = std::atoi(env);
        if (j > 0) return j;
    }
    return 1;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

std::vector<std::vector<int>> parse_shifts(const std::string& text) {
    // "0,0;1,0;0,1" -> [[0,0],[1,0],[0,1]]
    std::vector<std::vector<int>> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) out.push_back(parse_int_list(item));
    return out;
}

OracleGraph oracle_from_spec(const json& spec) {
    return gen_oracle(spec.at("m").get<int>(),
                      spec.at("shifts").get<std::vector<std::vector<int>>>());
}

struct GenOptions {
    std::string spec_path;
    std::string family;
    int n = 10, d = 3, seed = 0;
    std::string shifts = "0;1";
    int m = 1;
    std::string center = "0";
    int radius = 5;
    std::string forest_kind = "spider";
    int rays = 3, ray_length = 4, length = 10, vertices = 50;
    int k = 2;
    std::string output;
};

int run_gen(const GenOptions& opt) {
    json spec;
    if (!opt.spec_path.empty()) {
        spec = load_json_file(opt.spec_path);
    } else {
        spec["family"] = opt.family;
        spec["seed"] = opt.seed;
        if (opt.family == "random") {
            spec["n"] = opt.n;
            spec["d"] = opt.d;
        } else if (opt.family == "oracle") {
            spec["m"] = opt.m;
            spec["shifts"] = parse_shifts(opt.shifts);
            spec["center"] = parse_int_list(opt.center);
            spec["radius"] = opt.radius;
        } else if (opt.family == "forest") {
            spec["kind"] = opt.forest_kind;
            spec["rays"] = opt.rays;
            spec["ray_length"] = opt.ray_length;
            spec["length"] = opt.length;
            spec["vertices"] = opt.vertices;
        } else if (opt.family == "evenregular") {
            spec["n"] = opt.n;
            spec["k"] = opt.k;
        }
    }
    const std::string family = spec.at("family").get<std::string>();
    json out;
    if (family == "random") {
        auto g = gen_random_regular_bipartite(spec.at("n").get<int>(), spec.at("d").get<int>(),
                                              spec.at("seed").get<std::uint64_t>());
        out = graph_to_json(*g);
    } else if (family == "oracle") {
        OracleGraph o = oracle_from_spec(spec);
        Window w = make_window(o, spec.at("center").get<std::vector<int>>(),
                               spec.at("radius").get<int>());
        out = window_to_json(w);
    } else if (family == "forest") {
        ForestSpec fs;
        const std::string kind = spec.value("kind", "spider");
        if (kind == "spider")
            fs.kind = ForestKind::Spider;
        else if (kind == "path")
            fs.kind = ForestKind::Path;
        else if (kind == "random")
            fs.kind = ForestKind::RandomLeafless;
        else
            throw StructuralError("unknown forest kind " + kind);
        fs.rays = spec.value("rays", 3);
        fs.ray_length = spec.value("ray_length", 4);
        fs.length = spec.value("length", 10);
        fs.vertices = spec.value("vertices", 50);
        auto f = gen_boundaried_forest(fs, spec.value("seed", 0));
        out = forest_to_json(f);
    } else if (family == "evenregular") {
        auto g = gen_random_even_regular(spec.at("n").get<int>(), spec.at("k").get<int>(),
                                         spec.value("seed", 0));
        out["n"] = g.n;
        out["edges"] = json::array();
        for (const auto& e : g.edges)
            out["edges"].push_back(json{{"id", e.id}, {"u", e.u}, {"v", e.v}});
    } else {
        throw StructuralError("unknown family " + family);
    }
    save_json_file(opt.output, out);
    emit(json{{"cmd", "gen"},
              {"status", "ok"},
              {"family", family},
              {"output", opt.output}});
    return 0;
}

FractionalMatching matching_from_input(const json& j, int k) {
    if (j.contains("weights")) return matching_from_json(j);
    GraphPtr g = graph_from_json(j);
    // Uniform start k/d on a regular graph (interior degrees).
    int d = -1;
    for (const auto& v : g->vertices()) {
        if (v.boundary) continue;
        int deg = g->degree(v.id);
        if (d < 0) d = deg;
        if (deg != d) throw StructuralError("graph is not regular; supply explicit weights");
    }
    if (d <= 0) throw StructuralError("no interior vertices to infer the degree from");
    FractionalMatching f(g, d, k);
    for (const auto& e : g->edges()) f.set_weight_num(e.id, k);
    return f;
}

int run_round(const std::string& input, int k, const std::string& mode, std::uint64_t seed,
              int max_rounds, const std::string& trace_path, const std::string& output) {
    json j = load_json_file(input);
    FractionalMatching f = matching_from_input(j, k);
    std::vector<TraceEntry> trace;
    FractionalMatching result = f;
    if (mode == "saturate") {
        result = round_to_acyclic(f, trace_path.empty() ? nullptr : &trace);
    } else if (mode == "sigma") {
        auto sigma = random_sigma(seed, max_rounds, 16);
        result = sigma_round(f, sigma, max_rounds, trace_path.empty() ? nullptr : &trace);
    } else {
        throw StructuralError("mode must be saturate or sigma");
    }
    if (!trace_path.empty()) {
        std::ofstream out(trace_path);
        for (const auto& t : trace) {
            json line{{"round", t.round},
                      {"cycle", t.cycle},
                      {"direction", t.direction == Direction::Increase ? "increase" : "decrease"},
                      {"support", t.support_size}};
            out << line.dump() << "\n";
        }
    }
    if (!output.empty()) save_json_file(output, matching_to_json(result));
    emit(json{{"cmd", "round"},
              {"status", "ok"},
              {"mode", mode},
              {"updates", trace.size()},
              {"support", result.support().edge_ids.size()},
              {"output", output}});
    return 0;
}

int run_treematch(const std::string& input, const std::string& matching_path,
                  const std::string& report_path) {
    json j = load_json_file(input);
    BoundariedForest forest = forest_from_json(j);
    std::optional<FractionalMatching> weights;
    if (j.contains("weights")) weights = matching_from_json(j);

    auto reps = find_bad_ray_reps(forest);
    auto pruned = prune_bad_rays(forest, reps);
    auto tm = match_leafless_forest(pruned.forest, pruned.y_vertices,
                                    weights ? &*weights : nullptr);
    auto matched = extend_along_rays(tm.matched_edges, pruned.reps);

    if (!matching_path.empty()) {
        FactorSubgraph h{forest.graph, matched, 1};
        save_json_file(matching_path, factor_to_json(h));
    }
    if (!report_path.empty()) {
        json reports = json::array();
        for (const auto& r : pruned.reps) {
            json jr{{"ray", r.ray}, {"ray_edges", r.ray_edges}};
            std::vector<int> degrees;
            for (int v : r.ray) degrees.push_back(forest.graph->degree(v));
            jr["degrees"] = degrees;
            if (weights) {
                std::vector<std::vector<std::int64_t>> profile;
                for (std::size_t n = 0; 2 * n < r.ray_edges.size(); ++n)
                    profile.push_back({static_cast<std::int64_t>(n),
                                       weights->weight_num(r.ray_edges[2 * n])});
                jr["weight_profile_num"] = profile;
                jr["denominator"] = weights->denominator();
            }
            reports.push_back(jr);
        }
        save_json_file(report_path, reports);
    }
    emit(json{{"cmd", "treematch"},
              {"status", "ok"},
              {"reps", pruned.reps.size()},
              {"matched", matched.size()},
              {"infeasible", tm.infeasible_vertices.size()}});
    return 0;
}

int run_kfactor(const std::string& input, int d, int k, const std::string& output, bool trace) {
    (void)trace;
    json j = load_json_file(input);
    GraphPtr g = graph_from_json(j);
    auto h = k_factor(g, d, k);
    bool ok = verify_factor(*g, h.edge_ids, k);
    if (!output.empty()) save_json_file(output, factor_to_json(h));
    emit(json{{"cmd", "kfactor"},
              {"status", ok ? "ok" : "unverified"},
              {"d", d},
              {"k", k},
              {"edges", h.edge_ids.size()},
              {"verified", ok},
              {"output", output}});
    return ok ? 0 : 1;
}

int run_twofactor(const std::string& input, int d, const std::string& output) {
    json j = load_json_file(input);
    GraphPtr g = graph_from_json(j);
    auto h = two_factor(g, d);
    bool ok = verify_factor(*g, h.edge_ids, 2);
    if (!output.empty()) save_json_file(output, factor_to_json(h));
    emit(json{{"cmd", "twofactor"},
              {"status", ok ? "ok" : "unverified"},
              {"d", d},
              {"edges", h.edge_ids.size()},
              {"verified", ok},
              {"output", output}});
    return ok ? 0 : 1;
}

int run_corollary(const std::string& input, const std::string& orient,
                  const std::string& output) {
    if (orient != "euler") throw StructuralError("only --orient euler is supported");
    json j = load_json_file(input);
    GeneralMultigraph g;
    g.n = j.at("n").get<int>();
    for (const auto& je : j.at("edges"))
        g.edges.push_back({je.at("id").get<int>(), je.at("u").get<int>(), je.at("v").get<int>()});
    int deg = g.n > 0 ? g.degree(0) : 0;
    for (int v = 0; v < g.n; ++v)
        if (g.degree(v) != deg) throw StructuralError("graph is not regular");
    if (deg % 2 != 0) throw StructuralError("graph degree must be even (2k-regular)");
    auto o = balanced_orientation(g);
    auto res = corollary_factor(g, o, deg / 2);
    if (!output.empty()) save_json_file(output, json{{"k", res.k}, {"edges", res.edge_ids}});
    emit(json{{"cmd", "corollary"},
              {"status", "ok"},
              {"k", res.k},
              {"edges", res.edge_ids.size()},
              {"output", output}});
    return 0;
}

int run_verify(const std::string& graph_path, const std::string& factor_path, int k) {
    json jg = load_json_file(graph_path);
    GraphPtr g = graph_from_json(jg);
    json jf = load_json_file(factor_path);
    auto h = factor_from_json(jf, g);
    int kk = k >= 0 ? k : h.k;
    bool ok = verify_factor(*g, h.edge_ids, kk);
    emit(json{{"cmd", "verify"}, {"status", ok ? "ok" : "invalid"}, {"k", kk}, {"valid", ok}});
    return ok ? 0 : 1;
}

int run_experiment(const std::string& kind, const std::string& oracle_path,
                   const std::string& radii_csv, int seeds, int k, std::uint64_t seed,
                   const std::string& csv_path, int jobs) {
    json spec = load_json_file(oracle_path);
    OracleGraph o = oracle_from_spec(spec);
    std::vector<int> radii = parse_int_list(radii_csv);
    std::string csv;
    json summary{{"cmd", "experiment"}, {"kind", kind}, {"status", "ok"}};
    if (kind == "residual") {
        auto reports = window_residual_experiment(o, radii, k, seeds, seed, jobs);
        csv = residual_csv(reports);
        json med = json::array();
        for (int r : radii) {
            std::vector<Rational> vals;
            for (const auto& rep : reports)
                if (rep.radius == r) vals.push_back(rep.residual);
            std::sort(vals.begin(), vals.end(),
                      [](const Rational& a, const Rational& b) { return a < b; });
            med.push_back(json{{"radius", r}, {"median", vals[(vals.size() - 1) / 2].str()}});
        }
        summary["medians"] = med;
    } else if (kind == "parity") {
        auto stats = parity_obstruction_experiment(o, radii, seeds, seed, jobs);
        csv = parity_csv(stats);
        json freqs = json::array();
        for (const auto& s : stats)
            freqs.push_back(json{{"radius", s.radius},
                                 {"components", s.components},
                                 {"disagreeing", s.disagreeing},
                                 {"frequency", s.frequency().str()}});
        summary["frequencies"] = freqs;
    } else {
        throw StructuralError("experiment kind must be residual or parity");
    }
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        out << csv;
    }
    emit(summary);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-factors of regular bipartite graphs via exact fractional rounding"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* cgen = app.add_subcommand("gen", "generate graphs, windows and forests");
    cgen->add_option("--spec", gen.spec_path, "generator spec JSON");
    cgen->add_option("--family", gen.family, "random|oracle|forest|evenregular");
    cgen->add_option("--n", gen.n);
    cgen->add_option("--d", gen.d);
    cgen->add_option("--k", gen.k);
    cgen->add_option("--seed", gen.seed);
    cgen->add_option("--m", gen.m);
    cgen->add_option("--shifts", gen.shifts, "e.g. \"0,0;1,0;0,1\"");
    cgen->add_option("--center", gen.center, "e.g. \"0,0\"");
    cgen->add_option("--radius", gen.radius);
    cgen->add_option("--kind", gen.forest_kind, "spider|path|random");
    cgen->add_option("--rays", gen.rays);
    cgen->add_option("--ray-length", gen.ray_length);
    cgen->add_option("--length", gen.length);
    cgen->add_option("--vertices", gen.vertices);
    cgen->add_option("-o,--output", gen.output)->required();

    std::string rin, rmode = "saturate", rtrace, rout;
    int rk = 1, rmax = 200;
    std::uint64_t rseed = 0;
    auto* cround = app.add_subcommand("round", "drive a fractional matching toward integrality");
    cround->add_option("--input", rin)->required();
    cround->add_option("--k", rk);
    cround->add_option("--mode", rmode, "saturate|sigma");
    cround->add_option("--seed", rseed);
    cround->add_option("--max-rounds", rmax);
    cround->add_option("--emit-trace", rtrace);
    cround->add_option("-o,--emit", rout);

    std::string tin, tmatch, treport;
    auto* ctree = app.add_subcommand("treematch", "match a boundaried forest");
    ctree->add_option("--input", tin)->required();
    ctree->add_option("--emit-matching", tmatch);
    ctree->add_option("--report", treport);

    std::string kin, kout;
    int kd = 0, kk = 0;
    bool ktrace = false;
    auto* ckf = app.add_subcommand("kfactor", "k-regular spanning subgraph");
    ckf->add_option("--input", kin)->required();
    ckf->add_option("--d", kd)->required();
    ckf->add_option("--k", kk)->required();
    ckf->add_option("-o,--emit", kout);
    ckf->add_flag("--trace", ktrace);

    std::string tfin, tfout;
    int tfd = 0;
    auto* ctf = app.add_subcommand("twofactor", "2-factor of an even-regular bipartite graph");
    ctf->add_option("--input", tfin)->required();
    ctf->add_option("--d", tfd)->required();
    ctf->add_option("-o,--emit", tfout);

    std::string cin, corient = "euler", cout_;
    auto* ccor = app.add_subcommand("corollary", "2k-regular graph via balanced orientation");
    ccor->add_option("--input", cin)->required();
    ccor->add_option("--orient", corient);
    ccor->add_option("-o,--emit", cout_);

    std::string vgr, vfa;
    int vk = -1;
    auto* cver = app.add_subcommand("verify", "check a claimed k-factor");
    cver->add_option("--graph", vgr)->required();
    cver->add_option("--factor", vfa)->required();
    cver->add_option("--k", vk);

    std::string ekind, eoracle, eradii = "8,16,32", ecsv;
    int eseeds = 10, ek = 1, ejobs = default_jobs();
    std::uint64_t eseed = 1;
    auto* cexp = app.add_subcommand("experiment", "window residual / parity experiments");
    cexp->add_option("kind", ekind, "residual|parity")->required();
    cexp->add_option("--oracle", eoracle)->required();
    cexp->add_option("--radii", eradii);
    cexp->add_option("--seeds", eseeds, "number of centers / window pairs");
    cexp->add_option("--k", ek);
    cexp->add_option("--seed", eseed);
    cexp->add_option("--csv", ecsv);
    cexp->add_option("--jobs", ejobs);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cgen->parsed()) return run_gen(gen);
        if (cround->parsed()) return run_round(rin, rk, rmode, rseed, rmax, rtrace, rout);
        if (ctree->parsed()) return run_treematch(tin, tmatch, treport);
        if (ckf->parsed()) return run_kfactor(kin, kd, kk, kout, ktrace);
        if (ctf->parsed()) return run_twofactor(tfin, tfd, tfout);
        if (ccor->parsed()) return run_corollary(cin, corient, cout_);
        if (cver->parsed()) return run_verify(vgr, vfa, vk);
        if (cexp->parsed())
            return run_experiment(ekind, eoracle, eradii, eseeds, ek, eseed, ecsv, ejobs);
    } catch (const UnsupportedParameters& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        emit(json{{"status", "error"}, {"kind", "unsupported"}, {"message", e.what()}});
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        emit(json{{"status", "error"}, {"kind", "structural"}, {"message", e.what()}});
        return 1;
    }
    return 1;
}
