#pragma once

#include <sstream>
#include <string>

#include "ggt/conedoff.hpp"
#include "ggt/graph.hpp"
#include "ggt/words.hpp"

namespace ggt {

struct DotOptions {
    std::string name = "G";
    bool show_labels = true;
};

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline std::string dot_vertex_line(const Basis& basis, const VertexLabel& lab, int v,
                                   bool show_labels) {
    std::ostringstream os;
    os << "  v" << v << " [";
    std::string text;
    switch (lab.kind) {
        case VertexKind::Group:
            text = lab.word.empty() ? "1" : word_to_string(basis, lab.word);
            os << "shape=circle";
            break;
        case VertexKind::Cone:
            text = "cone(" + (lab.word.empty() ? std::string("1") : word_to_string(basis, lab.word)) + ")";
            os << "shape=diamond, style=filled, fillcolor=lightblue";
            break;
        case VertexKind::Tag:
            text = std::to_string(lab.tag);
            os << "shape=box";
            break;
    }
    if (show_labels) os << ", label=\"" << dot_escape(text) << "\"";
    os << "];\n";
    return os.str();
}

inline const char* dot_edge_style(EdgeClass c) {
    switch (c) {
        case EdgeClass::Cone: return " [style=dashed, color=blue]";
        case EdgeClass::Hyperbolic: return " [color=red]";
        case EdgeClass::Parabolic: return " [color=darkgreen]";
        case EdgeClass::Ambient: return "";
    }
    return "";
}

}  // namespace detail

inline std::string export_dot(const LabeledGraph& g, const Basis& basis,
                              const DotOptions& opts = {}) {
    std::ostringstream os;
    os << "graph " << opts.name << " {\n";
    for (int v = 0; v < g.vertex_count(); ++v)
        os << detail::dot_vertex_line(basis, g.label(v), v, opts.show_labels);
    for (const auto& [a, b] : g.edges()) os << "  v" << a << " -- v" << b << ";\n";
    os << "}\n";
    return os.str();
}

// Cone vertices are diamonds; cone-star edges are dashed, the two kinds
// of connecting edges colored, ambient edges plain.
inline std::string export_dot(const ConedGraphBundle& bundle, const Basis& basis,
                              const DotOptions& opts = {}) {
    std::ostringstream os;
    os << "graph " << opts.name << " {\n";
    for (int v = 0; v < bundle.graph.vertex_count(); ++v)
        os << detail::dot_vertex_line(basis, bundle.graph.label(v), v, opts.show_labels);
    for (size_t i = 0; i < bundle.edges.size(); ++i) {
        auto [a, b] = bundle.edges[i];
        os << "  v" << a << " -- v" << b << detail::dot_edge_style(bundle.provenance[i]) << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace ggt
