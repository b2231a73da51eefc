#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "ggt/conedoff.hpp"
#include "ggt/errors.hpp"
#include "ggt/graph.hpp"
#include "ggt/quasiconvex.hpp"

namespace ggt {

using Json = nlohmann::ordered_json;

// Graph schema:
//   { "basis": [["a","b"], ...],            factors with their letter names
//     "vertices": [{"id", "kind", "label"}, ...],
//     "edges": [[i, j], ...] }
// Cone vertices additionally carry "peripheral" and "letters"; tag
// vertices store their tag in "label".

inline Json basis_to_json(const Basis& basis) {
    Json factors = Json::array();
    for (int f = 0; f < basis.factor_count(); ++f) {
        Json names = Json::array();
        for (int l : basis.factor_letters(f)) names.push_back(basis.name(l));
        factors.push_back(names);
    }
    return factors;
}

inline Basis basis_from_json(const Json& j) {
    std::vector<std::vector<std::string>> factors;
    for (const auto& f : j) {
        std::vector<std::string> names;
        for (const auto& n : f) names.push_back(n.get<std::string>());
        factors.push_back(names);
    }
    return Basis(factors);
}

inline Json graph_to_json(const LabeledGraph& g, const Basis& basis) {
    Json out;
    out["basis"] = basis_to_json(basis);
    Json vs = Json::array();
    for (int v = 0; v < g.vertex_count(); ++v) {
        const auto& lab = g.label(v);
        Json jv;
        jv["id"] = v;
        switch (lab.kind) {
            case VertexKind::Group:
                jv["kind"] = "group";
                jv["label"] = word_to_string(basis, lab.word);
                break;
            case VertexKind::Cone:
                jv["kind"] = "cone";
                jv["label"] = word_to_string(basis, lab.word);
                jv["peripheral"] = lab.peripheral;
                break;
            case VertexKind::Tag:
                jv["kind"] = "tag";
                jv["label"] = std::to_string(lab.tag);
                break;
        }
        vs.push_back(jv);
    }
    out["vertices"] = vs;
    Json es = Json::array();
    for (const auto& [a, b] : g.edges()) es.push_back(Json::array({a, b}));
    out["edges"] = es;
    return out;
}

struct LoadedGraph {
    LabeledGraph graph;
    Basis basis;
};

inline LoadedGraph graph_from_json(const Json& j) {
    LoadedGraph out;
    if (!j.contains("basis") || !j.contains("vertices") || !j.contains("edges"))
        throw config_error("graph JSON needs 'basis', 'vertices' and 'edges'");
    out.basis = basis_from_json(j["basis"]);
    for (const auto& jv : j["vertices"]) {
        std::string kind = jv.at("kind").get<std::string>();
        std::string label = jv.at("label").get<std::string>();
        int id;
        if (kind == "group") {
            id = out.graph.add_vertex(VertexLabel::group(parse_word(out.basis, label)));
        } else if (kind == "cone") {
            id = out.graph.add_vertex(VertexLabel::cone(parse_word(out.basis, label),
                                                        jv.at("peripheral").get<int>()));
        } else if (kind == "tag") {
            id = out.graph.add_vertex(VertexLabel::tag_vertex(std::stoi(label)));
        } else {
            throw config_error("unknown vertex kind '" + kind + "'");
        }
        if (id != jv.at("id").get<int>())
            throw config_error("vertex ids must be consecutive from 0");
    }
    for (const auto& je : j["edges"]) {
        if (!je.is_array() || je.size() != 2) throw config_error("edges must be index pairs");
        out.graph.add_edge(je[0].get<int>(), je[1].get<int>());
    }
    out.graph.sort_adjacency();
    return out;
}

// Bundle schema: the graph schema plus a "provenance" array aligned with
// "edges" and per-cone metadata.
inline Json bundle_to_json(const ConedGraphBundle& bundle, const Basis& basis) {
    Json out = graph_to_json(bundle.graph, basis);
    out["ball_vertices"] = bundle.ball_vertex_count;
    Json prov = Json::array();
    for (auto c : bundle.provenance) prov.push_back(edge_class_name(c));
    out["provenance"] = prov;
    Json cones = Json::array();
    for (int ci = 0; ci < bundle.cone_count(); ++ci) {
        Json jc;
        jc["vertex"] = bundle.ball_vertex_count + ci;
        Json letters = Json::array();
        for (int l : bundle.cone_letters[size_t(ci)]) letters.push_back(basis.name(l));
        jc["letters"] = letters;
        jc["subgroup"] = bundle.cone_subgroup[size_t(ci)];
        cones.push_back(jc);
    }
    out["cones"] = cones;
    return out;
}

struct LoadedBundle {
    ConedGraphBundle bundle;
    Basis basis;
};

inline LoadedBundle bundle_from_json(const Json& j) {
    LoadedBundle out;
    auto loaded = graph_from_json(j);
    out.basis = loaded.basis;
    out.bundle.graph = std::move(loaded.graph);
    out.bundle.ball_vertex_count = j.at("ball_vertices").get<int>();
    out.bundle.edges = out.bundle.graph.edges();
    const auto& prov = j.at("provenance");
    if (prov.size() != out.bundle.edges.size())
        throw config_error("provenance array must align with the edge list");
    for (const auto& p : prov)
        out.bundle.provenance.push_back(edge_class_from_name(p.get<std::string>()));
    for (const auto& jc : j.at("cones")) {
        std::vector<int> letters;
        for (const auto& n : jc.at("letters")) {
            int idx = out.basis.find(n.get<std::string>());
            if (idx < 0) throw config_error("cone letter not in basis");
            letters.push_back(idx);
        }
        out.bundle.cone_letters.push_back(letters);
        out.bundle.cone_subgroup.push_back(jc.at("subgroup").get<int>());
    }
    if (int(out.bundle.cone_letters.size()) != out.bundle.cone_count())
        throw config_error("cone metadata must cover every cone vertex");
    return out;
}

inline Json qc_report_to_json(const QCReport& report) {
    Json out;
    Json recs = Json::array();
    for (const auto& r : report.records) {
        Json jr;
        jr["radius"] = r.radius;
        jr["depth"] = r.depth;
        jr["shadow_size"] = r.shadow_size;
        jr["hull_vertices"] = r.hull_vertices;
        jr["hull_edges"] = r.hull_edges;
        jr["class_count"] = r.class_count;
        jr["truncated"] = r.truncated;
        recs.push_back(jr);
    }
    out["records"] = recs;
    out["window"] = report.window;
    out["verdict"] = verdict_name(report.verdict);
    return out;
}

inline Json freeinf_report_to_json(const FreeinfReport& r) {
    Json out;
    out["n"] = r.n;
    out["m"] = r.m;
    out["degenerate"] = r.degenerate;
    if (r.degenerate) return out;
    out["conjugator_bound"] = r.conjugator_bound;
    out["word_bound"] = r.word_bound;
    out["tree_radius"] = r.tree_radius;
    out["nielsen_roundtrip"] = r.nielsen_roundtrip;
    out["retraction_detects"] = r.retraction_detects;
    Json inter;
    inter["verdict"] = r.intersection.consistent ? "CONSISTENT" : "WITNESS_FOUND";
    inter["witnesses"] = r.intersection.witnesses.size();
    inter["sampled_words"] = r.intersection.sampled_words;
    inter["conjugators"] = r.intersection.conjugators;
    inter["checks"] = r.intersection.checks;
    out["intersection"] = inter;
    out["peripheral_intersection_classes"] = r.r_witnesses;
    auto tree = [](const FreeinfReport::TreeStats& t) {
        Json jt;
        jt["vertices"] = t.vertices;
        jt["edges"] = t.edges;
        jt["cones"] = t.cones;
        jt["connected"] = t.connected;
        return jt;
    };
    out["tree1"] = tree(r.t1);
    out["tree2"] = tree(r.t2);
    out["pullback_cones"] = r.pullback_cones;
    out["pullback_equals_ball"] = r.pullback_equals_ball;
    return out;
}

inline void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const std::exception& e) {
        throw config_error("cannot parse '" + path + "': " + e.what());
    }
}

}  // namespace ggt
