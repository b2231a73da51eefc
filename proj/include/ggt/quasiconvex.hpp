#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ggt/conedoff.hpp"
#include "ggt/errors.hpp"
#include "ggt/flow.hpp"
#include "ggt/graph.hpp"
#include "ggt/words.hpp"

namespace ggt {

// Subgroup of the ambient free product: either a free-factor subgroup
// (subset of the basis letters) or a cyclic subgroup given by one word.
struct SubgroupDescriptor {
    std::vector<int> letters;
    std::optional<Word> cyclic_word;

    static SubgroupDescriptor free_factor(std::vector<int> letters) {
        std::sort(letters.begin(), letters.end());
        SubgroupDescriptor d;
        d.letters = std::move(letters);
        return d;
    }
    static SubgroupDescriptor cyclic(Word w) {
        if (w.empty()) throw config_error("cyclic subgroup generator must be nontrivial");
        SubgroupDescriptor d;
        d.cyclic_word = std::move(w);
        return d;
    }

    bool is_cyclic() const { return cyclic_word.has_value(); }

    bool contains(const Word& w) const {
        if (!is_cyclic()) return uses_only(w, letters);
        if (w.empty()) return true;
        const Word& gen = *cyclic_word;
        int bound = w.length() / std::max(1, gen.length()) + 2 * gen.length() + 2;
        for (int k = 1; k <= bound; ++k) {
            Word p = power(gen, k);
            if (p == w || inverse(p) == w) return true;
            if (p.length() > w.length() + 2 * gen.length()) break;
        }
        return false;
    }
};

// Orbit points of the identity under H that sit at graph distance at
// least `depth` from the identity: the deep trace that stands in for the
// limit set at this truncation.
inline std::vector<int> limit_shadow(const LabeledGraph& ball, const SubgroupDescriptor& h,
                                     int depth) {
    std::vector<int> shadow;
    int radius = 0;
    for (int v = 0; v < ball.vertex_count(); ++v) {
        if (ball.label(v).kind != VertexKind::Group)
            throw config_error("limit shadow expects a Cayley ball");
        radius = std::max(radius, ball.label(v).word.length());
    }
    if (depth > radius) throw config_error("shadow depth exceeds the ball radius");
    if (!h.is_cyclic()) {
        for (int v = 0; v < ball.vertex_count(); ++v) {
            const Word& w = ball.label(v).word;
            if (w.length() >= depth && uses_only(w, h.letters)) shadow.push_back(v);
        }
    } else {
        auto index = group_vertex_index(ball);
        const Word& gen = *h.cyclic_word;
        for (int k = 1; k <= radius + 2 * gen.length(); ++k) {
            for (int sign : {+1, -1}) {
                Word p = power(gen, sign * k);
                if (p.length() > radius) continue;
                auto it = index.find(p);
                if (it != index.end() && p.length() >= depth) shadow.push_back(it->second);
            }
        }
        std::sort(shadow.begin(), shadow.end());
        shadow.erase(std::unique(shadow.begin(), shadow.end()), shadow.end());
    }
    if (shadow.empty())
        throw config_error("limit shadow is empty: the orbit does not reach depth " +
                           std::to_string(depth));
    return shadow;
}

// Opt-in thickening: orbit points on the outermost sphere pull in their
// whole Floyd cluster, so the shadow approximates boundary points
// instead of bare orbit vertices. The plain orbit trace stays the
// default because it is exact and parameter-free.
template <class S>
std::vector<int> limit_shadow_clustered(const LabeledGraph& ball, const SubgroupDescriptor& h,
                                        int depth, const ScalingFunction& f, const S& eps) {
    auto core = limit_shadow(ball, h, depth);
    int radius = 0;
    for (int v = 0; v < ball.vertex_count(); ++v)
        radius = std::max(radius, ball.label(v).word.length());
    auto clusters = sphere_clusters<S>(ball, 0, f, radius, eps);
    std::set<int> out(core.begin(), core.end());
    std::set<int> core_set(core.begin(), core.end());
    for (const auto& cluster : clusters.clusters) {
        bool touches = false;
        for (int v : cluster)
            if (core_set.count(v)) touches = true;
        if (touches) out.insert(cluster.begin(), cluster.end());
    }
    return std::vector<int>(out.begin(), out.end());
}

// --- edge orbit classification -------------------------------------------------

// Partial self-map of the vertex set; -1 marks images outside the
// truncation.
using PartialMap = std::vector<int>;

struct OrbitClassification {
    size_t class_count = 0;
    std::vector<int> class_of;  // per edge, indices into 0..class_count-1
};

// Union-find closure of "some supplied map carries one edge to the
// other". The maps play the role of the enumerated H-elements.
inline OrbitClassification classify_edges_by_maps(const std::vector<EdgeId>& edges,
                                                  const std::vector<PartialMap>& maps) {
    std::map<EdgeId, int> index;
    for (size_t i = 0; i < edges.size(); ++i) index[edges[i]] = int(i);
    std::vector<int> parent(edges.size());
    for (size_t i = 0; i < edges.size(); ++i) parent[i] = int(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[size_t(x)] != x) {
            parent[size_t(x)] = parent[size_t(parent[size_t(x)])];
            x = parent[size_t(x)];
        }
        return x;
    };
    for (const auto& m : maps) {
        for (size_t i = 0; i < edges.size(); ++i) {
            int a = m[size_t(edges[i].first)], b = m[size_t(edges[i].second)];
            if (a < 0 || b < 0) continue;
            auto it = index.find(make_edge(a, b));
            if (it == index.end()) continue;
            int ra = find(int(i)), rb = find(it->second);
            if (ra != rb) parent[size_t(rb)] = ra;
        }
    }
    OrbitClassification out;
    std::map<int, int> relabel;
    out.class_of.resize(edges.size());
    for (size_t i = 0; i < edges.size(); ++i) {
        int r = find(int(i));
        auto it = relabel.find(r);
        if (it == relabel.end()) it = relabel.emplace(r, int(relabel.size())).first;
        out.class_of[i] = it->second;
    }
    out.class_count = relabel.size();
    return out;
}

namespace detail {

// Canonical H-orbit signature of an edge of group-labeled vertices, for
// a free-factor subgroup H acting by left multiplication. Among the
// elements h minimizing |h u| + |h v| (exactly those with h^-1 on the
// H-geodesic between the maximal H-prefixes of u and v), pick the
// shortlex-least sorted pair.
inline std::pair<Word, Word> free_factor_edge_signature(const Word& u, const Word& v,
                                                        const std::vector<int>& letters) {
    auto prefix = [&](const Word& w) {
        size_t n = 0;
        while (n < w.letters().size() &&
               std::find(letters.begin(), letters.end(), lit_index(w.letters()[n])) !=
                   letters.end())
            ++n;
        return Word(std::vector<Lit>(w.letters().begin(), w.letters().begin() + long(n)));
    };
    Word pu = prefix(u), pv = prefix(v);
    Word step = product(inverse(pu), pv);
    auto sorted_pair = [](Word a, Word b) {
        if (Word::shortlex_less(b, a)) std::swap(a, b);
        return std::make_pair(std::move(a), std::move(b));
    };
    std::optional<std::pair<Word, Word>> best;
    Word rho = pu;
    for (int t = 0;; ++t) {
        Word h = inverse(rho);
        auto cand = sorted_pair(product(h, u), product(h, v));
        if (!best) {
            best = cand;
        } else if (Word::shortlex_less(cand.first, best->first) ||
                   (cand.first == best->first && Word::shortlex_less(cand.second, best->second))) {
            best = cand;
        }
        if (t >= step.length()) break;
        rho = product(rho, Word(std::vector<Lit>{step.letters()[size_t(t)]}));
    }
    return *best;
}

}  // namespace detail

// Enumerated H-elements as left-translation maps on the ball, one per
// h = w^k with |h| within the identification bound 2 * radius.
inline std::vector<PartialMap> cyclic_translation_maps(const LabeledGraph& ball, const Word& gen,
                                                       int radius) {
    auto index = group_vertex_index(ball);
    std::vector<PartialMap> maps;
    int max_pow = (2 * radius) / std::max(1, gen.length()) + 2 * gen.length() + 2;
    for (int k = 1; k <= max_pow; ++k) {
        for (int sign : {+1, -1}) {
            Word h = power(gen, sign * k);
            if (h.length() > 2 * radius) continue;
            PartialMap m(size_t(ball.vertex_count()), -1);
            for (int v = 0; v < ball.vertex_count(); ++v) {
                auto it = index.find(product(h, ball.label(v).word));
                if (it != index.end()) m[size_t(v)] = it->second;
            }
            maps.push_back(std::move(m));
        }
    }
    return maps;
}

// One record of the |C^1/H| criterion at a fixed truncation radius:
// C = Hull(limit shadow), hull edges classified by H-translation.
struct QCRecord {
    int radius = 0;
    int depth = 0;
    size_t shadow_size = 0;
    size_t hull_vertices = 0;
    size_t hull_edges = 0;
    size_t class_count = 0;
    bool truncated = false;
};

enum class Verdict { Stable, Growing, Inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Stable: return "STABLE";
        case Verdict::Growing: return "GROWING";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

// Verdicts are evidence, not proof: STABLE needs the class count
// constant over the last `window` records, GROWING needs strict growth
// throughout.
inline Verdict verdict_from_counts(const std::vector<size_t>& counts, int window) {
    if (int(counts.size()) < window) return Verdict::Inconclusive;
    bool stable = true;
    for (size_t i = counts.size() - size_t(window) + 1; i < counts.size(); ++i)
        if (counts[i] != counts[i - 1]) stable = false;
    if (stable) return Verdict::Stable;
    bool growing = true;
    for (size_t i = 1; i < counts.size(); ++i)
        if (counts[i] <= counts[i - 1]) growing = false;
    if (growing) return Verdict::Growing;
    return Verdict::Inconclusive;
}

struct QCReport {
    std::vector<QCRecord> records;
    Verdict verdict = Verdict::Inconclusive;
    int window = 3;

    void validate() const {
        for (size_t i = 1; i < records.size(); ++i)
            if (records[i].radius <= records[i - 1].radius)
                throw config_error("QC records must have strictly increasing radii");
    }
};

// Classifies the hull edges of the limit shadow by H-translation and
// counts the classes. All hull vertices must be group vertices.
inline QCRecord subgroup_hull_orbit_count(const LabeledGraph& ball, const SubgroupDescriptor& h,
                                          int depth, const HullOptions& opts = {}) {
    QCRecord rec;
    rec.depth = depth;
    for (int v = 0; v < ball.vertex_count(); ++v)
        rec.radius = std::max(rec.radius, ball.label(v).word.length());
    auto shadow = limit_shadow(ball, h, depth);
    rec.shadow_size = shadow.size();
    auto c = hull(ball, shadow, opts);
    rec.hull_vertices = c.vertices.size();
    rec.hull_edges = c.edges.size();
    rec.truncated = c.truncated;
    if (h.is_cyclic()) {
        auto maps = cyclic_translation_maps(ball, *h.cyclic_word, rec.radius);
        rec.class_count = classify_edges_by_maps(c.edges, maps).class_count;
    } else {
        std::set<std::pair<Word, Word>> classes;
        for (const auto& [a, b] : c.edges)
            classes.insert(detail::free_factor_edge_signature(ball.label(a).word,
                                                              ball.label(b).word, h.letters));
        rec.class_count = classes.size();
    }
    return rec;
}

// Radius sweep of the criterion. Ball builds are independent and run
// concurrently; records are merged in radius order.
inline QCReport quasiconvexity_verdict(const Basis& basis, const SubgroupDescriptor& h,
                                       const std::vector<int>& radii, int depth_offset = 1,
                                       int window = 3, const HullOptions& opts = {}) {
    if (radii.size() < 3) throw config_error("verdict needs at least 3 radii");
    for (size_t i = 1; i < radii.size(); ++i)
        if (radii[i] <= radii[i - 1]) throw config_error("radii must be strictly increasing");
    QCReport report;
    report.window = window;
    std::vector<std::future<QCRecord>> jobs;
    for (int r : radii)
        jobs.push_back(std::async(std::launch::async, [&, r] {
            auto ball = cayley_ball(basis, r);
            return subgroup_hull_orbit_count(ball, h, r - depth_offset, opts);
        }));
    std::vector<size_t> counts;
    for (auto& j : jobs) {
        report.records.push_back(j.get());
        counts.push_back(report.records.back().class_count);
    }
    report.validate();
    report.verdict = verdict_from_counts(counts, window);
    return report;
}

// --- the two-splittings scenario ------------------------------------------------

// Concrete data for the two free-product splittings of the truncated
// free group G = <x_1..x_n> * <y_1..y_m>:
//   w_i = x_2^-i x_1 x_2^i   a free basis of a rank-m subgroup of <X>
//   z_i = y_i w_i            so X u Z is again a free basis
//   retraction f: x -> x, y -> 1, which kills P = <Y> and is injective
//   on Q = <Z> (it maps the z-basis to the w-basis)
struct FreeinfData {
    Basis basis;  // factor 0: x-letters, factor 1: y-letters
    std::vector<Word> x, y, w, z;
    Endomorphism retraction;  // f
    Endomorphism phi;         // x -> x, y -> z
};

inline FreeinfData make_freeinf_data(int n, int m) {
    if (n < 2) throw config_error("the scenario needs at least two x-generators");
    if (m < 1) throw config_error("the scenario needs at least one y-generator");
    FreeinfData d;
    std::vector<std::string> xs, ys;
    for (int i = 1; i <= n; ++i) xs.push_back("x" + std::to_string(i));
    for (int i = 1; i <= m; ++i) ys.push_back("y" + std::to_string(i));
    d.basis = Basis({xs, ys});
    for (int i = 0; i < n; ++i) d.x.push_back(Word(std::vector<Lit>{lit(i, +1)}));
    for (int i = 0; i < m; ++i) d.y.push_back(Word(std::vector<Lit>{lit(n + i, +1)}));
    for (int i = 1; i <= m; ++i) {
        Word conj = power(d.x[1], i);
        d.w.push_back(product(product(inverse(conj), d.x[0]), conj));
    }
    for (int i = 0; i < m; ++i) d.z.push_back(product(d.y[size_t(i)], d.w[size_t(i)]));
    d.retraction = Endomorphism(d.basis.rank());
    d.phi = Endomorphism(d.basis.rank());
    for (int i = 0; i < n; ++i) {
        d.retraction.set_image(i, d.x[size_t(i)]);
        d.phi.set_image(i, d.x[size_t(i)]);
    }
    for (int i = 0; i < m; ++i) {
        d.retraction.set_image(n + i, Word());
        d.phi.set_image(n + i, d.z[size_t(i)]);
    }
    return d;
}

struct FreeinfReport {
    int n = 0, m = 0;
    bool degenerate = false;  // m = 0: Q is empty, nothing to compare
    int conjugator_bound = 0, word_bound = 0, tree_radius = 0;
    bool nielsen_roundtrip = false;   // z_i w_i^-1 reduces exactly to y_i
    bool retraction_detects = false;  // f(z_i) = w_i for all i
    IntersectionReport intersection;  // kernel-based witness search
    size_t r_witnesses = 0;           // peripheral-intersection witnesses (expect 0)
    struct TreeStats {
        int vertices = 0, edges = 0, cones = 0;
        bool connected = false;
    };
    TreeStats t1, t2;          // ball coned over P-cosets resp. Q-cosets
    int pullback_cones = 0;    // cones of the R-coned graph (expect 0)
    bool pullback_equals_ball = false;
};

// Runs the full scenario: builds X, Y, W, Z, checks the Nielsen basis
// change, searches for intersection witnesses at the given bounds,
// computes the peripheral intersections R (expected empty), and builds
// the two coned trees. An empty R means the pullback-graph construction
// has no cone vertices at all: its peripheral structure is trivial.
inline FreeinfReport freeinf_scenario(int n, int m, int conj_bound, int word_bound,
                                      int tree_radius = 2) {
    FreeinfReport report;
    report.n = n;
    report.m = m;
    report.conjugator_bound = conj_bound;
    report.word_bound = word_bound;
    report.tree_radius = tree_radius;
    if (m == 0) {
        report.degenerate = true;
        return report;
    }
    FreeinfData d = make_freeinf_data(n, m);

    report.nielsen_roundtrip = true;
    report.retraction_detects = true;
    for (int i = 0; i < m; ++i) {
        if (product(d.z[size_t(i)], inverse(d.w[size_t(i)])) != d.y[size_t(i)])
            report.nielsen_roundtrip = false;
        if (apply_endomorphism(d.retraction, d.z[size_t(i)]) != d.w[size_t(i)])
            report.retraction_detects = false;
    }

    auto conjugators = enumerate_reduced_words(d.basis, conj_bound);
    report.intersection =
        verify_trivial_intersection(d.y, d.z, d.retraction, conjugators, word_bound);

    std::vector<int> p_letters;
    for (int i = 0; i < m; ++i) p_letters.push_back(n + i);
    report.r_witnesses =
        peripheral_intersection_witnesses(p_letters, d.z, conjugators, word_bound).size();

    // the two relative graphs: the ball coned over P-cosets, and the
    // ball in the X u Z basis coned over Q-cosets (same shape by the
    // basis change)
    {
        auto ball = cayley_ball(d.basis, tree_radius);
        PeripheralStructure ps;
        ps.subgroups.push_back({p_letters, ConeMode::None, {}});
        auto t1 = build_coned_graph(ball, d.basis, ps);
        report.t1 = {t1.graph.vertex_count(), int(t1.edges.size()), t1.cone_count(),
                     is_connected(t1.graph)};
    }
    {
        std::vector<std::string> xs, zs;
        for (int i = 1; i <= n; ++i) xs.push_back("x" + std::to_string(i));
        for (int i = 1; i <= m; ++i) zs.push_back("z" + std::to_string(i));
        Basis basis2({xs, zs});
        std::vector<int> q_letters;
        for (int i = 0; i < m; ++i) q_letters.push_back(n + i);
        auto ball = cayley_ball(basis2, tree_radius);
        PeripheralStructure ps;
        ps.subgroups.push_back({q_letters, ConeMode::None, {}});
        auto t2 = build_coned_graph(ball, basis2, ps);
        report.t2 = {t2.graph.vertex_count(), int(t2.edges.size()), t2.cone_count(),
                     is_connected(t2.graph)};
    }
    // R is empty, so the pullback construction cones nothing: the graph
    // is the plain ball
    {
        auto ball = cayley_ball(d.basis, std::min(tree_radius, 2));
        PeripheralStructure empty;
        auto gamma = build_coned_graph(ball, d.basis, empty);
        report.pullback_cones = gamma.cone_count();
        report.pullback_equals_ball = gamma.graph.vertex_count() == ball.vertex_count() &&
                                      int(gamma.edges.size()) == ball.edge_count();
    }
    return report;
}

}  // namespace ggt
