#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ggt/errors.hpp"
#include "ggt/words.hpp"

namespace ggt {

enum class VertexKind { Group, Cone, Tag };

// Vertex payload. Group vertices carry a reduced word, cone vertices a
// canonical (shortlex-minimal) coset representative plus the index of
// the peripheral subgroup they cone off, tag vertices a bare integer
// (used by stand-in graphs such as grids).
struct VertexLabel {
    VertexKind kind = VertexKind::Group;
    Word word;
    int peripheral = -1;
    int tag = -1;

    static VertexLabel group(Word w) { return {VertexKind::Group, std::move(w), -1, -1}; }
    static VertexLabel cone(Word coset_rep, int peripheral) {
        return {VertexKind::Cone, std::move(coset_rep), peripheral, -1};
    }
    static VertexLabel tag_vertex(int t) { return {VertexKind::Tag, Word(), -1, t}; }

    bool operator==(const VertexLabel& o) const {
        return kind == o.kind && word == o.word && peripheral == o.peripheral && tag == o.tag;
    }
};

using EdgeId = std::pair<int, int>;  // normalized: first < second

inline EdgeId make_edge(int a, int b) { return a < b ? EdgeId{a, b} : EdgeId{b, a}; }

// Finite simple graph with labeled vertices. Vertex order is the
// insertion order of the builder; the edge list is kept sorted so two
// identical builds are bit-identical.
class LabeledGraph {
public:
    int add_vertex(VertexLabel label) {
        vertices_.push_back(std::move(label));
        adj_.emplace_back();
        return int(vertices_.size()) - 1;
    }

    // Returns false on duplicates; rejects self-loops.
    bool add_edge(int a, int b) {
        if (a == b) throw config_error("self-loops are not allowed");
        check_vertex(a);
        check_vertex(b);
        EdgeId e = make_edge(a, b);
        if (edge_set_.count(e)) return false;
        edge_set_.insert(e);
        adj_[size_t(a)].push_back(b);
        adj_[size_t(b)].push_back(a);
        return true;
    }

    bool has_edge(int a, int b) const { return edge_set_.count(make_edge(a, b)) != 0; }

    int vertex_count() const { return int(vertices_.size()); }
    int edge_count() const { return int(edge_set_.size()); }
    const VertexLabel& label(int v) const { return vertices_.at(size_t(v)); }
    const std::vector<int>& neighbors(int v) const { return adj_.at(size_t(v)); }

    std::vector<EdgeId> edges() const {
        return std::vector<EdgeId>(edge_set_.begin(), edge_set_.end());
    }

    // Neighbor lists in ascending order; call once after construction.
    void sort_adjacency() {
        for (auto& ns : adj_) std::sort(ns.begin(), ns.end());
    }

private:
    void check_vertex(int v) const {
        if (v < 0 || v >= vertex_count()) throw config_error("vertex index out of range");
    }

    std::vector<VertexLabel> vertices_;
    std::vector<std::vector<int>> adj_;
    std::set<EdgeId> edge_set_;
};

constexpr int kUnreachable = std::numeric_limits<int>::max();

inline std::vector<int> bfs_distances(const LabeledGraph& g, int src) {
    std::vector<int> dist(size_t(g.vertex_count()), kUnreachable);
    std::deque<int> queue{src};
    dist[size_t(src)] = 0;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : g.neighbors(v)) {
            if (dist[size_t(w)] == kUnreachable) {
                dist[size_t(w)] = dist[size_t(v)] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

// Distance from src with one edge removed.
inline std::vector<int> bfs_distances_avoiding(const LabeledGraph& g, int src, EdgeId banned) {
    std::vector<int> dist(size_t(g.vertex_count()), kUnreachable);
    std::deque<int> queue{src};
    dist[size_t(src)] = 0;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : g.neighbors(v)) {
            if (make_edge(v, w) == banned) continue;
            if (dist[size_t(w)] == kUnreachable) {
                dist[size_t(w)] = dist[size_t(v)] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

inline std::vector<std::vector<int>> all_pairs_distances(const LabeledGraph& g) {
    std::vector<std::vector<int>> d;
    d.reserve(size_t(g.vertex_count()));
    for (int v = 0; v < g.vertex_count(); ++v) d.push_back(bfs_distances(g, v));
    return d;
}

inline bool is_connected(const LabeledGraph& g) {
    if (g.vertex_count() == 0) return true;
    auto dist = bfs_distances(g, 0);
    return std::none_of(dist.begin(), dist.end(), [](int d) { return d == kUnreachable; });
}

inline bool is_tree(const LabeledGraph& g) {
    return is_connected(g) && g.edge_count() == g.vertex_count() - 1;
}

// --- Cayley balls ----------------------------------------------------------

// Ball of the given radius in the Cayley graph of the free product on
// `basis`, with vertices ordered shortlex (identity first). Graph
// distance from the identity equals word length for every vertex.
//
// `vertex_cap` guards against accidentally huge balls.
inline LabeledGraph cayley_ball(const Basis& basis, int radius, size_t vertex_cap = 2'000'000) {
    if (radius < 0) throw config_error("radius must be non-negative");
    if (basis.rank() == 0) throw config_error("basis must be nonempty");
    LabeledGraph g;
    std::map<Word, int> index;
    Word identity;
    index[identity] = g.add_vertex(VertexLabel::group(identity));
    std::vector<Word> layer{identity};
    for (int len = 1; len <= radius; ++len) {
        std::vector<Word> next;
        for (const auto& w : layer) {
            for (int i = 0; i < basis.rank(); ++i) {
                for (int sign : {+1, -1}) {
                    Lit l = lit(i, sign);
                    if (!w.empty() && w.letters().back() == lit_inv(l)) continue;
                    std::vector<Lit> ls = w.letters();
                    ls.push_back(l);
                    next.push_back(Word(std::move(ls)));
                }
            }
        }
        std::sort(next.begin(), next.end(), Word::shortlex_less);
        next.erase(std::unique(next.begin(), next.end()), next.end());
        if (g.vertex_count() + next.size() > vertex_cap)
            throw cap_error("projected ball size exceeds the vertex cap of " +
                            std::to_string(vertex_cap));
        for (const auto& w : next) index[w] = g.add_vertex(VertexLabel::group(w));
        layer = std::move(next);
    }
    for (const auto& [w, v] : index) {
        for (int i = 0; i < basis.rank(); ++i) {
            Word next = product(w, Word(std::vector<Lit>{lit(i, +1)}));
            auto it = index.find(next);
            if (it != index.end()) g.add_edge(v, it->second);
        }
    }
    g.sort_adjacency();
    return g;
}

// Index of the vertex whose label word equals w, or -1.
inline int find_group_vertex(const LabeledGraph& g, const Word& w) {
    for (int v = 0; v < g.vertex_count(); ++v) {
        const auto& lab = g.label(v);
        if (lab.kind == VertexKind::Group && lab.word == w) return v;
    }
    return -1;
}

// Reverse lookup table for Cayley balls and coned bundles.
inline std::map<Word, int> group_vertex_index(const LabeledGraph& g) {
    std::map<Word, int> index;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.label(v).kind == VertexKind::Group) index[g.label(v).word] = v;
    return index;
}

// n-by-m grid graph with tag labels, row-major vertex order.
inline LabeledGraph make_grid(int rows, int cols) {
    LabeledGraph g;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) g.add_vertex(VertexLabel::tag_vertex(r * cols + c));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            int v = r * cols + c;
            if (c + 1 < cols) g.add_edge(v, v + 1);
            if (r + 1 < rows) g.add_edge(v, v + cols);
        }
    }
    g.sort_adjacency();
    return g;
}

inline LabeledGraph make_cycle(int n) {
    LabeledGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex(VertexLabel::tag_vertex(i));
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    g.sort_adjacency();
    return g;
}

// --- geodesic enumeration --------------------------------------------------

using Path = std::vector<int>;

struct GeodesicList {
    std::vector<Path> paths;
    bool truncated = false;  // hit the cap; list is a prefix of the full set
};

// All geodesics from u to v, enumerated over the BFS distance DAG in
// deterministic (sorted-adjacency) order. Geodesic counts explode in
// non-tree graphs, hence the cap.
inline GeodesicList geodesics_between(const LabeledGraph& g, int u, int v, size_t cap = 100'000) {
    auto dist_v = bfs_distances(g, v);
    if (dist_v[size_t(u)] == kUnreachable)
        throw config_error("vertices are in different components");
    GeodesicList out;
    Path current{u};
    // iterative DFS over tight edges
    struct Frame {
        int vertex;
        size_t next_neighbor;
    };
    std::vector<Frame> stack{{u, 0}};
    while (!stack.empty()) {
        if (stack.back().vertex == v) {
            if (out.paths.size() >= cap) {
                out.truncated = true;
                break;
            }
            out.paths.push_back(current);
            stack.pop_back();
            current.pop_back();
            continue;
        }
        const int at = stack.back().vertex;
        const auto& ns = g.neighbors(at);
        bool descended = false;
        while (stack.back().next_neighbor < ns.size()) {
            int w = ns[stack.back().next_neighbor++];
            if (dist_v[size_t(w)] == dist_v[size_t(at)] - 1) {
                stack.push_back({w, 0});
                current.push_back(w);
                descended = true;
                break;
            }
        }
        if (!descended) {
            stack.pop_back();
            current.pop_back();
        }
    }
    return out;
}

inline bool path_is_geodesic(const LabeledGraph& g, const Path& p) {
    if (p.empty()) return false;
    for (size_t i = 0; i + 1 < p.size(); ++i)
        if (!g.has_edge(p[i], p[i + 1])) return false;
    auto dist = bfs_distances(g, p.front());
    return dist[size_t(p.back())] == int(p.size()) - 1;
}

// --- simple arcs and Bowditch fineness --------------------------------------

struct ArcCount {
    uint64_t count = 0;
    bool exact = true;  // false when the search budget was exhausted; count is a lower bound
};

// Number of simple arcs (no repeated vertex) of exactly the given length
// from u to v. Exhaustive DFS pruned by the remaining-distance bound.
inline ArcCount simple_arcs_count(const LabeledGraph& g, int u, int v, int length,
                                  uint64_t budget = 50'000'000) {
    if (length < 1) throw config_error("arc length must be >= 1");
    auto dist_v = bfs_distances(g, v);
    ArcCount out;
    uint64_t visited_nodes = 0;
    std::vector<char> on_path(size_t(g.vertex_count()), 0);
    // recursive lambda
    auto walk = [&](auto&& self, int at, int remaining) -> void {
        if (!out.exact) return;
        if (++visited_nodes > budget) {
            out.exact = false;
            return;
        }
        if (remaining == 0) {
            if (at == v) ++out.count;
            return;
        }
        if (at == v) return;  // arcs end at v; v may not be interior
        if (dist_v[size_t(at)] == kUnreachable || dist_v[size_t(at)] > remaining) return;
        on_path[size_t(at)] = 1;
        for (int w : g.neighbors(at)) {
            if (on_path[size_t(w)]) continue;
            self(self, w, remaining - 1);
        }
        on_path[size_t(at)] = 0;
    };
    walk(walk, u, length);
    return out;
}

struct FinenessProfile {
    // entry [L-1] = max over vertex pairs of the number of simple arcs of
    // length exactly L, for L = 1..max_length
    std::vector<uint64_t> max_arcs;
    bool exact = true;
};

// Bowditch fineness diagnostic: in a fine graph every entry stays finite
// as the truncation radius grows; entries that grow with the radius are
// the red flag. Enumerates, for every source, all simple walks up to
// max_length and tallies them per (endpoint, length).
inline FinenessProfile fineness_profile(const LabeledGraph& g, int max_length,
                                        uint64_t budget = 200'000'000) {
    if (max_length < 1) throw config_error("max_length must be >= 1");
    FinenessProfile out;
    out.max_arcs.assign(size_t(max_length), 0);
    const int n = g.vertex_count();
    uint64_t visited = 0;
    std::vector<uint64_t> tally(size_t(n * max_length), 0);
    std::vector<char> on_path(size_t(n), 0);
    for (int u = 0; u < n; ++u) {
        std::fill(tally.begin(), tally.end(), 0);
        auto walk = [&](auto&& self, int at, int depth) -> void {
            if (!out.exact) return;
            if (++visited > budget) {
                out.exact = false;
                return;
            }
            if (depth > 0) tally[size_t((at)*max_length + depth - 1)] += 1;
            if (depth == max_length) return;
            on_path[size_t(at)] = 1;
            for (int w : g.neighbors(at)) {
                if (on_path[size_t(w)]) continue;
                self(self, w, depth + 1);
            }
            on_path[size_t(at)] = 0;
        };
        walk(walk, u, 0);
        for (int v = 0; v < n; ++v) {
            if (v == u) continue;
            for (int L = 1; L <= max_length; ++L)
                out.max_arcs[size_t(L - 1)] =
                    std::max(out.max_arcs[size_t(L - 1)], tally[size_t(v * max_length + L - 1)]);
        }
    }
    return out;
}

// Lengths whose max arc count strictly increases somewhere along a
// sequence of profiles taken at growing truncation radii. Any entry here
// is the fineness red flag: in a fine graph each count stabilizes.
inline std::vector<int> fineness_growth(const std::vector<FinenessProfile>& profiles) {
    std::vector<int> growing;
    if (profiles.empty()) return growing;
    size_t lengths = profiles.front().max_arcs.size();
    for (size_t L = 0; L < lengths; ++L) {
        for (size_t i = 1; i < profiles.size(); ++i) {
            if (profiles[i].max_arcs.size() != lengths)
                throw config_error("profiles must share max_length");
            if (profiles[i].max_arcs[L] > profiles[i - 1].max_arcs[L]) {
                growing.push_back(int(L) + 1);
                break;
            }
        }
    }
    return growing;
}

}  // namespace ggt
