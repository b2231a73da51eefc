// Command-line driver. Every subcommand is deterministic: the same
// config and inputs produce byte-identical outputs.
//
// Exit codes: 0 success, 2 bad config/input, 3 cap or budget exceeded,
// 4 violated theorem-backed invariant (always a bug).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "ggt/config.hpp"
#include "ggt/dot.hpp"
#include "ggt/errors.hpp"
#include "ggt/flow.hpp"
#include "ggt/json_io.hpp"
#include "ggt/quasiconvex.hpp"

namespace {

using namespace ggt;

Basis basis_from_flags(int rank, const std::string& letters) {
    if (!letters.empty()) {
        std::vector<std::vector<std::string>> factors;
        for (const auto& part : detail::split_on(letters, '|'))
            factors.push_back(detail::split_ws(part));
        return Basis(factors);
    }
    if (rank <= 0) throw config_error("need --rank or --letters");
    return Basis::free_group(rank);
}

std::vector<int> parse_vertex_set(const LabeledGraph& g, const Basis& basis,
                                  const std::string& spec) {
    std::vector<int> out;
    for (const auto& part : detail::split_on(spec, '|')) {
        Word w = parse_word(basis, detail::trim(part));
        int v = find_group_vertex(g, w);
        if (v < 0)
            throw config_error("vertex '" + detail::trim(part) + "' is not in the graph");
        out.push_back(v);
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open '" + path + "' for writing");
    out << text;
}

ScalingFunction scaling_from_flags(const std::string& kind, const std::string& mu, double s) {
    if (kind == "geometric") return ScalingFunction::geometric(parse_rational(mu));
    if (kind == "polynomial") return ScalingFunction::polynomial(s);
    throw config_error("unknown scaling kind '" + kind + "'");
}

int run(int argc, char** argv) {
    CLI::App app{"desk-scale toolkit for Floyd metrics, coned-off Cayley graphs and "
                 "dynamical quasiconvexity on finite group-graph truncations"};
    app.require_subcommand(1);

    // cayley
    auto* cayley = app.add_subcommand("cayley", "build a Cayley ball and write it as JSON");
    int cayley_rank = 0, cayley_radius = 0;
    std::string cayley_letters, cayley_out;
    size_t cayley_cap = 2'000'000;
    cayley->add_option("--rank", cayley_rank, "free group rank (letters a, b, ...)");
    cayley->add_option("--letters", cayley_letters, "generator names, factors split by '|'");
    cayley->add_option("--radius", cayley_radius, "ball radius")->required();
    cayley->add_option("--cap", cayley_cap, "vertex cap");
    cayley->add_option("--out", cayley_out, "output JSON path")->required();

    // coned
    auto* coned = app.add_subcommand("coned", "build the coned graph bundle for a scenario");
    std::string coned_config, coned_out, coned_dot;
    coned->add_option("--config", coned_config, "scenario config")->required();
    coned->add_option("--out", coned_out, "output bundle JSON");
    coned->add_option("--dot", coned_dot, "also write DOT");

    // floyd
    auto* floyd = app.add_subcommand("floyd", "Floyd distance between two vertices");
    std::string floyd_in, floyd_base = "", floyd_a, floyd_b;
    std::string floyd_kind = "geometric", floyd_mu = "1/2";
    double floyd_s = 2.0;
    floyd->add_option("--in", floyd_in, "graph JSON")->required();
    floyd->add_option("--base", floyd_base, "base vertex word (default identity)");
    floyd->add_option("--a", floyd_a, "first vertex word")->required();
    floyd->add_option("--b", floyd_b, "second vertex word")->required();
    floyd->add_option("--kind", floyd_kind, "scaling kind: geometric | polynomial");
    floyd->add_option("--mu", floyd_mu, "geometric ratio");
    floyd->add_option("--exponent", floyd_s, "polynomial exponent");

    // fine
    auto* fine = app.add_subcommand("fine",
                                    "fineness profile; several inputs at growing radii "
                                    "also report where counts grow");
    std::vector<std::string> fine_in;
    int fine_maxlen = 4;
    fine->add_option("--in", fine_in, "graph JSON (repeatable, ordered by radius)")->required();
    fine->add_option("--max-length", fine_maxlen, "max arc length");

    // delta
    auto* delta = app.add_subcommand("delta", "thin-triangle delta by exhaustive scan");
    std::string delta_in;
    delta->add_option("--in", delta_in, "graph JSON")->required();

    // hull
    auto* hullc = app.add_subcommand("hull", "geodesic hull of a vertex set");
    std::string hull_in, hull_set;
    hullc->add_option("--in", hull_in, "graph JSON")->required();
    hullc->add_option("--set", hull_set, "vertex words separated by '|'")->required();

    // vis
    auto* vis = app.add_subcommand("vis", "visibility witness between two vertex sets");
    std::string vis_in, vis_a, vis_b;
    vis->add_option("--in", vis_in, "graph JSON")->required();
    vis->add_option("--a", vis_a, "set A, words separated by '|'")->required();
    vis->add_option("--b", vis_b, "set B, words separated by '|'")->required();

    // qc
    auto* qc = app.add_subcommand("qc", "quasiconvexity radius sweep");
    std::string qc_config, qc_out;
    qc->add_option("--config", qc_config, "scenario config")->required();
    qc->add_option("--out", qc_out, "output report JSON");

    // freeinf
    auto* freeinf = app.add_subcommand("freeinf", "two-splittings counterexample scenario");
    std::string freeinf_config, freeinf_out;
    int fi_n = 2, fi_m = 3, fi_conj = 4, fi_word = 6, fi_radius = 2;
    freeinf->add_option("--config", freeinf_config, "scenario config with a [freeinf] section");
    freeinf->add_option("--n", fi_n, "number of x-generators");
    freeinf->add_option("--m", fi_m, "number of y-generators");
    freeinf->add_option("--conj-bound", fi_conj, "conjugator length bound");
    freeinf->add_option("--word-bound", fi_word, "sampled word length bound");
    freeinf->add_option("--tree-radius", fi_radius, "radius of the coned trees");
    freeinf->add_option("--out", freeinf_out, "output report JSON");

    // export-dot
    auto* exdot = app.add_subcommand("export-dot", "write a graph or bundle as DOT");
    std::string exdot_in, exdot_out;
    exdot->add_option("--in", exdot_in, "graph or bundle JSON")->required();
    exdot->add_option("--out", exdot_out, "output DOT path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (cayley->parsed()) {
        Basis basis = basis_from_flags(cayley_rank, cayley_letters);
        auto ball = cayley_ball(basis, cayley_radius, cayley_cap);
        write_json_file(cayley_out, graph_to_json(ball, basis));
        std::cout << "ball: " << ball.vertex_count() << " vertices, " << ball.edge_count()
                  << " edges\n";
    } else if (coned->parsed()) {
        auto cfg = load_scenario_config(coned_config);
        auto ball = cayley_ball(cfg.need_basis(), cfg.need_radius(), cfg.ball_cap);
        auto bundle = build_coned_graph(ball, cfg.need_basis(), cfg.need_peripheral());
        std::cout << "coned graph: " << bundle.graph.vertex_count() << " vertices, "
                  << bundle.edges.size() << " edges, " << bundle.cone_count() << " cones\n";
        if (!coned_out.empty()) write_json_file(coned_out, bundle_to_json(bundle, cfg.need_basis()));
        if (!coned_dot.empty()) write_text(coned_dot, export_dot(bundle, cfg.need_basis()));
    } else if (floyd->parsed()) {
        auto loaded = graph_from_json(read_json_file(floyd_in));
        auto f = scaling_from_flags(floyd_kind, floyd_mu, floyd_s);
        int base = find_group_vertex(loaded.graph, parse_word(loaded.basis, floyd_base));
        int a = find_group_vertex(loaded.graph, parse_word(loaded.basis, floyd_a));
        int b = find_group_vertex(loaded.graph, parse_word(loaded.basis, floyd_b));
        if (base < 0 || a < 0 || b < 0) throw config_error("vertex not in graph");
        if (f.exact())
            std::cout << rational_to_string(floyd_distance<Rational>(loaded.graph, base, f, a, b))
                      << "\n";
        else
            std::cout << floyd_distance<double>(loaded.graph, base, f, a, b) << "\n";
    } else if (fine->parsed()) {
        std::vector<FinenessProfile> profiles;
        bool exhausted = false;
        for (const auto& path : fine_in) {
            auto loaded = graph_from_json(read_json_file(path));
            profiles.push_back(fineness_profile(loaded.graph, fine_maxlen));
            std::cout << path << ":\n";
            for (int L = 1; L <= fine_maxlen; ++L)
                std::cout << "  length " << L << ": max simple arcs "
                          << profiles.back().max_arcs[size_t(L - 1)] << "\n";
            exhausted = exhausted || !profiles.back().exact;
        }
        if (profiles.size() > 1) {
            auto growing = fineness_growth(profiles);
            if (growing.empty()) {
                std::cout << "stable: no length grows across the inputs\n";
            } else {
                std::cout << "growing lengths (fineness red flag):";
                for (int L : growing) std::cout << " " << L;
                std::cout << "\n";
            }
        }
        if (exhausted) {
            std::cout << "(budget exhausted: entries are lower bounds)\n";
            throw cap_error("fineness budget exhausted");
        }
    } else if (delta->parsed()) {
        auto loaded = graph_from_json(read_json_file(delta_in));
        auto rep = thin_triangle_delta_exhaustive(loaded.graph);
        std::cout << rep.delta << "\n";
        if (rep.truncated) throw cap_error("geodesic cap hit during the triangle scan");
    } else if (hullc->parsed()) {
        auto loaded = graph_from_json(read_json_file(hull_in));
        auto b = parse_vertex_set(loaded.graph, loaded.basis, hull_set);
        auto h = hull(loaded.graph, b);
        std::cout << "hull: " << h.vertices.size() << " vertices, " << h.edges.size()
                  << " edges\n";
        for (int v : h.vertices) {
            const auto& lab = loaded.graph.label(v);
            std::cout << "  " << (lab.word.empty() ? "1" : word_to_string(loaded.basis, lab.word))
                      << "\n";
        }
        if (h.truncated) throw cap_error("geodesic cap hit during hull enumeration");
    } else if (vis->parsed()) {
        auto loaded = graph_from_json(read_json_file(vis_in));
        auto a = parse_vertex_set(loaded.graph, loaded.basis, vis_a);
        auto b = parse_vertex_set(loaded.graph, loaded.basis, vis_b);
        auto w = visibility_witness(loaded.graph, a, b);
        std::cout << "geodesics: " << w.geodesics << ", witness edges: " << w.f.size() << "\n";
        for (const auto& [x, y] : w.f) std::cout << "  {" << x << ", " << y << "}\n";
        if (w.truncated) throw cap_error("geodesic cap hit during witness search");
    } else if (qc->parsed()) {
        auto cfg = load_scenario_config(qc_config);
        if (!cfg.qc_subgroup) throw config_error("config needs a [qc] subgroup");
        if (cfg.qc_radii.empty()) throw config_error("config needs [qc] radii");
        HullOptions opts;
        opts.geodesic_cap = cfg.geodesic_cap;
        opts.margin = cfg.margin;
        auto report = quasiconvexity_verdict(cfg.need_basis(), *cfg.qc_subgroup, cfg.qc_radii,
                                             cfg.qc_depth_offset, cfg.qc_window, opts);
        std::cout << "radius  shadow  hull_edges  classes\n";
        for (const auto& r : report.records)
            std::cout << "  " << r.radius << "     " << r.shadow_size << "      " << r.hull_edges
                      << "        " << r.class_count << "\n";
        std::cout << "verdict: " << verdict_name(report.verdict) << "\n";
        if (!qc_out.empty()) write_json_file(qc_out, qc_report_to_json(report));
    } else if (freeinf->parsed()) {
        if (!freeinf_config.empty()) {
            auto cfg = load_scenario_config(freeinf_config);
            if (!cfg.freeinf_n || !cfg.freeinf_m)
                throw config_error("config needs [freeinf] n and m");
            fi_n = *cfg.freeinf_n;
            fi_m = *cfg.freeinf_m;
            fi_conj = cfg.freeinf_conjugator_bound;
            fi_word = cfg.freeinf_word_bound;
            fi_radius = cfg.freeinf_tree_radius;
        }
        auto report = freeinf_scenario(fi_n, fi_m, fi_conj, fi_word, fi_radius);
        if (report.degenerate) {
            std::cout << "degenerate scenario: m = 0 leaves Q empty\n";
        } else {
            std::cout << "intersection: "
                      << (report.intersection.consistent ? "CONSISTENT" : "WITNESS_FOUND") << " ("
                      << report.intersection.witnesses.size() << " witnesses, "
                      << report.intersection.checks << " checks)\n";
            std::cout << "peripheral intersections R: "
                      << (report.r_witnesses == 0 ? "empty" : std::to_string(report.r_witnesses))
                      << "\n";
            std::cout << "tree1: " << report.t1.vertices << " vertices, " << report.t1.cones
                      << " cones, " << (report.t1.connected ? "connected" : "DISCONNECTED")
                      << "\n";
            std::cout << "tree2: " << report.t2.vertices << " vertices, " << report.t2.cones
                      << " cones, " << (report.t2.connected ? "connected" : "DISCONNECTED")
                      << "\n";
            std::cout << "pullback graph cones: " << report.pullback_cones
                      << (report.pullback_cones == 0 ? " (no parabolic classes at this scale)"
                                                     : "")
                      << "\n";
        }
        if (!freeinf_out.empty()) write_json_file(freeinf_out, freeinf_report_to_json(report));
    } else if (exdot->parsed()) {
        auto j = read_json_file(exdot_in);
        if (j.contains("provenance")) {
            auto loaded = bundle_from_json(j);
            write_text(exdot_out, export_dot(loaded.bundle, loaded.basis));
        } else {
            auto loaded = graph_from_json(j);
            write_text(exdot_out, export_dot(loaded.graph, loaded.basis));
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ggt::invariant_error& e) {
        std::cerr << "invariant violated (bug): " << e.what() << "\n";
        return 4;
    } catch (const ggt::cap_error& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 3;
    } catch (const ggt::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
