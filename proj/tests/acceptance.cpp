// Acceptance suite: one criterion per check, one PASS/FAIL line each.
// Usage: ggt_acceptance [cli_path scenario_dir [tmp_dir]]
// The CLI-dependent checks report FAIL if the paths are missing.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ggt/config.hpp"
#include "ggt/dot.hpp"
#include "ggt/flow.hpp"
#include "ggt/json_io.hpp"
#include "ggt/quasiconvex.hpp"
#include "oracles.hpp"

using namespace ggt;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, double seconds,
            const std::string& detail) {
    std::printf("%s  criterion %2d: %-28s (%6.2f s)  %s\n", pass ? "PASS" : "FAIL", number,
                name.c_str(), seconds, detail.c_str());
    if (!pass) ++g_failures;
}

void run(int number, const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        auto [p, d] = body();
        pass = p;
        detail = d;
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(number, name, pass, secs, detail);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- criterion bodies ------------------------------------------------------

std::pair<bool, std::string> floyd_base_change() {
    auto ball = cayley_ball(Basis::free_group(2), 5);
    auto f = ScalingFunction::geometric(Rational(1, 2));
    auto t0 = std::chrono::steady_clock::now();
    auto sweep = base_change_exhaustive(ball, f, 2);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // cross-check the scaled-integer sweep against the generic rational
    // Dijkstra route on sampled base pairs
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> pick(0, ball.vertex_count() - 1);
    size_t cross_violations = 0;
    for (int i = 0; i < 6; ++i) {
        int u = pick(rng);
        int v = ball.neighbors(u)[0];
        std::vector<std::pair<int, int>> pairs;
        for (int j = 0; j < 40; ++j) pairs.push_back({pick(rng), pick(rng)});
        auto rep = base_change_check(ball, f, u, v, pairs);
        cross_violations += rep.violations.size();
    }

    std::ostringstream d;
    d << sweep.checks << " checks, " << sweep.violations << " violations, cross-route "
      << cross_violations;
    return {sweep.violations == 0 && cross_violations == 0 && secs < 60.0 &&
                sweep.base_pairs > 0,
            d.str()};
}

std::pair<bool, std::string> fineness_oracle() {
    bool ok = true;
    // trees: every pair, every length <= 6, at radii up to 4
    auto basis = Basis::free_group(2);
    for (int radius = 1; radius <= 4; ++radius) {
        auto ball = cayley_ball(basis, radius);
        for (int u = 0; u < ball.vertex_count() && ok; ++u)
            for (int v = u + 1; v < ball.vertex_count() && ok; ++v)
                for (int len = 1; len <= 6; ++len) {
                    auto res = simple_arcs_count(ball, u, v, len);
                    if (!res.exact || res.count > 1) ok = false;
                }
    }
    // coned ball: profile must equal the brute-force tally exactly
    auto ball4 = cayley_ball(basis, 4);
    PeripheralStructure ps;
    ps.subgroups.push_back({{0}, ConeMode::Hyperbolic, {}});
    auto bundle = build_coned_graph(ball4, basis, ps);
    const int maxlen = 4;
    auto profile = fineness_profile(bundle.graph, maxlen);
    auto adj = oracle::adjacency(bundle.graph);
    std::vector<uint64_t> want(maxlen, 0);
    for (int u = 0; u < bundle.graph.vertex_count(); ++u) {
        auto tally = oracle::simple_path_tally(adj, u, maxlen);
        for (int v = 0; v < bundle.graph.vertex_count(); ++v) {
            if (v == u) continue;
            for (int L = 1; L <= maxlen; ++L)
                want[size_t(L - 1)] = std::max(want[size_t(L - 1)], tally[size_t(v)][size_t(L)]);
        }
    }
    bool match = profile.exact && profile.max_arcs == want;
    std::ostringstream d;
    d << "tree arcs <= 1: " << (ok ? "yes" : "NO") << "; coned profile";
    for (auto m : profile.max_arcs) d << " " << m;
    d << (match ? " == oracle" : " != oracle");
    return {ok && match, d.str()};
}

std::pair<bool, std::string> hyperbolicity_detector() {
    auto ball = cayley_ball(Basis::free_group(2), 4);
    auto tree_rep = thin_triangle_delta_exhaustive(ball);
    std::vector<int> deltas;
    for (int n = 3; n <= 5; ++n)
        deltas.push_back(thin_triangle_delta_exhaustive(make_grid(n, n)).delta);
    bool growing = deltas[0] < deltas[1] && deltas[1] < deltas[2];
    std::ostringstream d;
    d << "tree delta " << tree_rep.delta << "; grid deltas " << deltas[0] << "," << deltas[1]
      << "," << deltas[2];
    return {tree_rep.delta == 0 && !tree_rep.truncated && growing, d.str()};
}

std::pair<bool, std::string> alt_hyperbolicity() {
    bool trees_ok = true;
    for (const auto& fixture :
         {cayley_ball(Basis::free_group(2), 3), cayley_ball(Basis::free_group(1), 4),
          cayley_ball(Basis::free_group(3), 2)}) {
        for (const auto& rep : alt_hyperbolicity_delta(fixture, fixture.edges()))
            if (!rep.found || rep.delta != 1 || rep.f != std::vector<EdgeId>{rep.e})
                trees_ok = false;
    }
    auto cyc = make_cycle(4);
    bool cycle_ok = true;
    for (const auto& rep : alt_hyperbolicity_delta(cyc, cyc.edges())) {
        if (!rep.found || rep.delta != 2) cycle_ok = false;
        if (rep.delta != oracle::min_alt_delta(cyc, rep.e)) cycle_ok = false;
    }
    std::ostringstream d;
    d << "trees F={e} delta 1: " << (trees_ok ? "yes" : "NO") << "; 4-cycle delta 2 == brute: "
      << (cycle_ok ? "yes" : "NO");
    return {trees_ok && cycle_ok, d.str()};
}

std::pair<bool, std::string> hull_correctness() {
    auto basis = Basis::free_group(2);
    auto ball = cayley_ball(basis, 3);
    int p = find_group_vertex(ball, parse_word(basis, "a a"));
    int q = find_group_vertex(ball, parse_word(basis, "A A"));
    auto h = hull(ball, {p, q});
    auto axis = oracle::tree_path(oracle::adjacency(ball), p, q);
    std::sort(axis.begin(), axis.end());
    bool axis_ok = h.vertices == axis && h.edges.size() == 4;

    size_t monotone_fail = 0;
    std::mt19937_64 rng(43);
    auto coned = [&] {
        PeripheralStructure ps;
        ps.subgroups.push_back({{0}, ConeMode::Hyperbolic, {}});
        return build_coned_graph(ball, basis, ps).graph;
    }();
    const LabeledGraph* fixtures[] = {&ball, &coned};
    for (const auto* g : fixtures) {
        std::uniform_int_distribution<int> pick(0, g->vertex_count() - 1);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<int> small, large;
            for (int i = 0; i < 3; ++i) small.push_back(pick(rng));
            large = small;
            for (int i = 0; i < 2; ++i) large.push_back(pick(rng));
            auto hs = hull(*g, small);
            auto hl = hull(*g, large);
            for (int v : hs.vertices)
                if (!hl.contains_vertex(v)) ++monotone_fail;
            for (const auto& e : hs.edges)
                if (!std::binary_search(hl.edges.begin(), hl.edges.end(), e)) ++monotone_fail;
            for (int v : small)
                if (!hs.contains_vertex(v)) ++monotone_fail;
        }
    }
    std::ostringstream d;
    d << "axis hull " << (axis_ok ? "exact" : "WRONG") << "; monotonicity failures "
      << monotone_fail << "/200 subset pairs";
    return {axis_ok && monotone_fail == 0, d.str()};
}

std::pair<bool, std::string> quasiconvexity_criterion() {
    auto basis = Basis::free_group(2);
    auto report =
        quasiconvexity_verdict(basis, SubgroupDescriptor::free_factor({0}), {4, 5, 6, 7, 8});
    bool stable = report.verdict == Verdict::Stable;
    bool counts_one = true;
    for (const auto& r : report.records) counts_one = counts_one && r.class_count == 1;

    // grid diagonal stand-in with the independent edge-orbit oracle
    std::vector<size_t> counts, oracle_counts;
    for (int n = 3; n <= 5; ++n) {
        auto grid = make_grid(n, n);
        auto h = hull(grid, {0, n * n - 1});
        std::vector<PartialMap> maps;
        for (int m = -(n - 1); m <= n - 1; ++m) {
            if (m == 0) continue;
            PartialMap pm(size_t(n) * size_t(n), -1);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    if (r + m >= 0 && r + m < n && c + m >= 0 && c + m < n)
                        pm[size_t(r * n + c)] = (r + m) * n + (c + m);
            maps.push_back(pm);
        }
        counts.push_back(classify_edges_by_maps(h.edges, maps).class_count);
        oracle_counts.push_back(oracle::edge_orbit_count(h.edges, maps));
    }
    bool growing = counts[0] < counts[1] && counts[1] < counts[2] &&
                   verdict_from_counts(counts, 3) == Verdict::Growing;
    std::ostringstream d;
    d << "axis verdict " << verdict_name(report.verdict) << " (counts 1); grid counts "
      << counts[0] << "," << counts[1] << "," << counts[2]
      << (counts == oracle_counts ? " == oracle" : " != oracle");
    return {stable && counts_one && growing && counts == oracle_counts, d.str()};
}

std::pair<bool, std::string> coned_construction(const std::string& scenario_dir) {
    if (scenario_dir.empty()) return {false, "scenario directory not supplied"};
    bool all_ok = true;
    std::ostringstream d;
    for (const std::string name : {"coned_a.cfg", "coned_ab.cfg", "coned_nested.cfg"}) {
        auto cfg = load_scenario_config(scenario_dir + "/" + name);
        auto ball = cayley_ball(cfg.need_basis(), cfg.need_radius(), cfg.ball_cap);
        auto bundle = build_coned_graph(ball, cfg.need_basis(), cfg.need_peripheral());
        bool partition = bundle.provenance.size() == bundle.edges.size();
        for (size_t i = 0; i < bundle.edges.size(); ++i) {
            auto [a, b] = bundle.edges[i];
            bool touches_cone = a >= bundle.ball_vertex_count || b >= bundle.ball_vertex_count;
            EdgeClass c = bundle.provenance[i];
            if (touches_cone && c != EdgeClass::Cone && c != EdgeClass::Parabolic)
                partition = false;
            if (!touches_cone && (c == EdgeClass::Cone)) partition = false;
            if (!touches_cone && !ball.has_edge(a, b)) partition = false;
        }
        bool connected = is_connected(bundle.graph);
        auto violations = equivariance_violations(bundle, cfg.need_basis());
        if (!(partition && connected && violations.empty())) all_ok = false;
        d << name << "(" << (partition ? "part" : "PART!") << ","
          << (connected ? "conn" : "DISC!") << "," << violations.size() << " eqv) ";
    }
    return {all_ok, d.str()};
}

std::pair<bool, std::string> freeinf_criterion() {
    auto t0 = std::chrono::steady_clock::now();
    auto report = freeinf_scenario(2, 3, 4, 6, 2);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = report.intersection.consistent && report.intersection.witnesses.empty() &&
              report.r_witnesses == 0 && report.t1.connected && report.t2.connected &&
              report.nielsen_roundtrip && report.retraction_detects && secs < 120.0;
    std::ostringstream d;
    d << (report.intersection.consistent ? "CONSISTENT" : "WITNESS") << ", "
      << report.intersection.checks << " checks, R classes " << report.r_witnesses
      << ", trees " << (report.t1.connected && report.t2.connected ? "connected" : "BROKEN")
      << ", nielsen " << (report.nielsen_roundtrip ? "ok" : "BROKEN");
    return {ok, d.str()};
}

std::pair<bool, std::string> visibility_criterion() {
    std::mt19937_64 rng(47);
    auto basis = Basis::free_group(2);
    auto tree = cayley_ball(basis, 3);
    auto coned = [&] {
        PeripheralStructure ps;
        ps.subgroups.push_back({{0}, ConeMode::Hyperbolic, {}});
        return build_coned_graph(cayley_ball(basis, 3), basis, ps).graph;
    }();
    auto grid = make_grid(4, 4);
    const LabeledGraph* fixtures[] = {&tree, &coned, &grid};
    size_t missed = 0, total_geodesics = 0;
    for (const auto* g : fixtures) {
        std::uniform_int_distribution<int> pick(0, g->vertex_count() - 1);
        for (int trial = 0; trial < 50; ++trial) {
            std::set<int> a_set, b_set;
            while (a_set.size() < 2) a_set.insert(pick(rng));
            while (b_set.size() < 2) {
                int v = pick(rng);
                if (!a_set.count(v)) b_set.insert(v);
            }
            std::vector<int> a(a_set.begin(), a_set.end()), b(b_set.begin(), b_set.end());
            auto w = visibility_witness(*g, a, b);
            std::set<EdgeId> f(w.f.begin(), w.f.end());
            for (int x : a) {
                for (int y : b) {
                    for (const auto& p : geodesics_between(*g, x, y).paths) {
                        ++total_geodesics;
                        bool hit = false;
                        for (size_t i = 0; i + 1 < p.size(); ++i)
                            if (f.count(make_edge(p[i], p[i + 1]))) hit = true;
                        if (!hit) ++missed;
                    }
                }
            }
        }
    }
    std::ostringstream d;
    d << total_geodesics << " geodesics, " << missed << " missed";
    return {missed == 0 && total_geodesics > 0, d.str()};
}

std::pair<bool, std::string> determinism(const std::string& cli, const std::string& scenario_dir,
                                         const std::string& tmp) {
    if (cli.empty() || scenario_dir.empty()) return {false, "cli path not supplied"};
    // a fast qc config for the double run
    {
        std::ofstream cfg(tmp + "/qc_small.cfg");
        cfg << "[basis]\nletters = a b\n\n[qc]\nsubgroup = a\nradii = 3 4 5\n";
    }
    auto sh = [&](const std::string& cmd) {
        std::string full = cli + " " + cmd + " > " + tmp + "/stdout.txt 2>&1";
        int rc = std::system(full.c_str());
        return std::make_pair(WEXITSTATUS(rc), slurp(tmp + "/stdout.txt"));
    };
    struct Step {
        std::string args;
        std::vector<std::string> files;
    };
    std::vector<Step> steps = {
        {"cayley --rank 2 --radius 3 --out " + tmp + "/d_ball.json", {"d_ball.json"}},
        {"coned --config " + scenario_dir + "/coned_a.cfg --out " + tmp + "/d_bundle.json --dot " +
             tmp + "/d_bundle.dot",
         {"d_bundle.json", "d_bundle.dot"}},
        {"floyd --in " + tmp + "/d_ball.json --a \"a\" --b \"b\" --mu 1/2", {}},
        {"fine --in " + tmp + "/d_ball.json --max-length 3", {}},
        {"delta --in " + tmp + "/d_ball.json", {}},
        {"hull --in " + tmp + "/d_ball.json --set \"a a|A A\"", {}},
        {"vis --in " + tmp + "/d_ball.json --a \"a a\" --b \"b b\"", {}},
        {"qc --config " + tmp + "/qc_small.cfg --out " + tmp + "/d_qc.json", {"d_qc.json"}},
        {"freeinf --n 2 --m 2 --conj-bound 3 --word-bound 6 --out " + tmp + "/d_fi.json",
         {"d_fi.json"}},
        {"export-dot --in " + tmp + "/d_ball.json --out " + tmp + "/d_ball.dot", {"d_ball.dot"}},
    };
    size_t mismatches = 0;
    for (const auto& step : steps) {
        auto first = sh(step.args);
        std::vector<std::string> contents;
        for (const auto& f : step.files) contents.push_back(slurp(tmp + "/" + f));
        auto second = sh(step.args);
        if (first.first != 0 || second.first != 0) ++mismatches;
        if (first.second != second.second) ++mismatches;
        for (size_t i = 0; i < step.files.size(); ++i)
            if (contents[i].empty() || contents[i] != slurp(tmp + "/" + step.files[i]))
                ++mismatches;
    }
    std::ostringstream d;
    d << steps.size() << " commands run twice, " << mismatches << " mismatches";
    return {mismatches == 0, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "";
    std::string scenarios = argc > 2 ? argv[2] : "";
    std::string tmp = argc > 3 ? argv[3] : "/tmp";

    run(1, "floyd base change", floyd_base_change);
    run(2, "fineness oracle", fineness_oracle);
    run(3, "hyperbolicity detector", hyperbolicity_detector);
    run(4, "alt-hyperbolicity witness", alt_hyperbolicity);
    run(5, "hull correctness", hull_correctness);
    run(6, "quasiconvexity criterion", quasiconvexity_criterion);
    run(7, "coned construction", [&] { return coned_construction(scenarios); });
    run(8, "freeinf scenario", freeinf_criterion);
    run(9, "visibility witnesses", visibility_criterion);
    run(10, "cli determinism", [&] { return determinism(cli, scenarios, tmp); });

    if (g_failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
