#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "ggt/errors.hpp"
#include "ggt/floyd.hpp"
#include "ggt/graph.hpp"

namespace ggt {

// Finite shadow of an eventual geodesic: a geodesic core with optional
// constant tails flagged at either end (the stop-paths, infinite in the
// idealized object, are flags at this scale).
struct EventualGeodesicSegment {
    Path core;
    bool left_stop = false;
    bool right_stop = false;

    static EventualGeodesicSegment checked(const LabeledGraph& g, Path core, bool left_stop,
                                           bool right_stop) {
        if (core.size() > 1 && !path_is_geodesic(g, core))
            throw config_error("core of an eventual geodesic must be a geodesic");
        EventualGeodesicSegment s;
        s.core = std::move(core);
        s.left_stop = left_stop;
        s.right_stop = right_stop;
        return s;
    }
};

// The edge-avoidance entourage u_e: a pair (a, b) is u_e-small iff some
// geodesic from a to b avoids e. Diagonal pairs are always small.
struct EdgeEntourage {
    EdgeId e;
};

inline bool ue_small(const LabeledGraph& g, EdgeId e, int a, int b) {
    if (a == b) return true;
    auto with = bfs_distances(g, a);
    auto without = bfs_distances_avoiding(g, a, e);
    if (with[size_t(b)] == kUnreachable) throw config_error("vertices are in different components");
    return without[size_t(b)] == with[size_t(b)];
}

// Symmetric boolean matrix packed into 64-bit rows.
class BitMatrix {
public:
    explicit BitMatrix(int n) : n_(n), words_((size_t(n) + 63) / 64), bits_(size_t(n) * words_, 0) {}

    void set(int i, int j) {
        bits_[size_t(i) * words_ + size_t(j) / 64] |= uint64_t(1) << (size_t(j) % 64);
    }
    bool get(int i, int j) const {
        return (bits_[size_t(i) * words_ + size_t(j) / 64] >> (size_t(j) % 64)) & 1;
    }
    int size() const { return n_; }

    void and_with(const BitMatrix& o) {
        for (size_t k = 0; k < bits_.size(); ++k) bits_[k] &= o.bits_[k];
    }

    // true iff rows i and j share a set bit
    bool rows_intersect(int i, int j) const {
        const uint64_t* a = &bits_[size_t(i) * words_];
        const uint64_t* b = &bits_[size_t(j) * words_];
        for (size_t k = 0; k < words_; ++k)
            if (a[k] & b[k]) return true;
        return false;
    }

private:
    int n_;
    size_t words_;
    std::vector<uint64_t> bits_;
};

// u_e-smallness of every vertex pair at once: one BFS per source on the
// graph with e removed, compared against the untouched distances.
inline BitMatrix smallness_matrix(const LabeledGraph& g, EdgeId e,
                                  const std::vector<std::vector<int>>& dist) {
    const int n = g.vertex_count();
    BitMatrix m(n);
    for (int a = 0; a < n; ++a) {
        auto without = bfs_distances_avoiding(g, a, e);
        for (int b = 0; b < n; ++b)
            if (without[size_t(b)] == dist[size_t(a)][size_t(b)]) m.set(a, b);
    }
    return m;
}

// --- geodesic hulls ----------------------------------------------------------

struct HullOptions {
    size_t geodesic_cap = 100'000;
    // endpoints deeper than (radius - margin) in a Cayley ball are
    // boundary-suspect; the result is flagged, not rejected. -1 picks
    // radius / 4.
    int margin = -1;
};

struct HullResult {
    std::vector<int> vertices;  // sorted, contains the input set
    std::vector<EdgeId> edges;  // sorted
    bool truncated = false;     // some geodesic enumeration hit the cap
    bool beyond_margin = false;

    bool contains_vertex(int v) const {
        return std::binary_search(vertices.begin(), vertices.end(), v);
    }
};

// Union of the images of all geodesics with both endpoints in B. Equal
// endpoint pairs contribute their constant geodesic, so B is always
// contained in its hull, and the hull is monotone in B.
inline HullResult hull(const LabeledGraph& g, const std::vector<int>& b,
                       const HullOptions& opts = {}) {
    if (b.empty()) throw config_error("hull of an empty set");
    std::set<int> vset(b.begin(), b.end());
    std::set<EdgeId> eset;
    std::vector<int> points(vset.begin(), vset.end());
    HullResult out;
    for (size_t i = 0; i < points.size(); ++i) {
        for (size_t j = i + 1; j < points.size(); ++j) {
            auto geos = geodesics_between(g, points[i], points[j], opts.geodesic_cap);
            if (geos.truncated) out.truncated = true;
            for (const auto& p : geos.paths) {
                for (size_t k = 0; k < p.size(); ++k) {
                    vset.insert(p[k]);
                    if (k + 1 < p.size()) eset.insert(make_edge(p[k], p[k + 1]));
                }
            }
        }
    }
    out.vertices.assign(vset.begin(), vset.end());
    out.edges.assign(eset.begin(), eset.end());
    int radius = 0;
    bool ball_like = true;
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (g.label(v).kind != VertexKind::Group) ball_like = false;
        radius = std::max(radius, g.label(v).word.length());
    }
    int margin = opts.margin < 0 ? radius / 4 : opts.margin;
    if (ball_like && margin > 0)
        for (int v : b)
            if (g.label(v).word.length() > radius - margin) out.beyond_margin = true;
    return out;
}

// --- visibility witnesses -----------------------------------------------------

struct VisibilityWitness {
    std::vector<EdgeId> f;  // every enumerated A-B geodesic crosses f
    size_t geodesics = 0;
    bool truncated = false;
};

// Finite edge set meeting every geodesic between A and B (greedy cover,
// minimized but not guaranteed minimum).
inline VisibilityWitness visibility_witness(const LabeledGraph& g, const std::vector<int>& a,
                                            const std::vector<int>& b, size_t cap = 100'000) {
    if (a.empty() || b.empty()) throw config_error("visibility sets must be nonempty");
    for (int x : a)
        for (int y : b)
            if (x == y) throw config_error("visibility sets must be disjoint");
    VisibilityWitness out;
    std::vector<std::vector<EdgeId>> geodesic_edges;
    for (int x : a) {
        for (int y : b) {
            auto geos = geodesics_between(g, x, y, cap);
            if (geos.truncated) out.truncated = true;
            for (const auto& p : geos.paths) {
                std::vector<EdgeId> es;
                es.reserve(p.size());
                for (size_t k = 0; k + 1 < p.size(); ++k) es.push_back(make_edge(p[k], p[k + 1]));
                if (es.empty())
                    throw config_error("visibility sets must be disjoint");
                geodesic_edges.push_back(std::move(es));
            }
        }
    }
    out.geodesics = geodesic_edges.size();
    std::vector<char> covered(geodesic_edges.size(), 0);
    size_t remaining = geodesic_edges.size();
    while (remaining > 0) {
        std::map<EdgeId, size_t> gain;
        for (size_t i = 0; i < geodesic_edges.size(); ++i) {
            if (covered[i]) continue;
            for (const auto& e : geodesic_edges[i]) ++gain[e];
        }
        EdgeId best = gain.begin()->first;
        size_t best_gain = gain.begin()->second;
        for (const auto& [e, c] : gain) {
            if (c > best_gain) {
                best = e;
                best_gain = c;
            }
        }
        out.f.push_back(best);
        for (size_t i = 0; i < geodesic_edges.size(); ++i) {
            if (covered[i]) continue;
            if (std::find(geodesic_edges[i].begin(), geodesic_edges[i].end(), best) !=
                geodesic_edges[i].end()) {
                covered[i] = 1;
                --remaining;
            }
        }
    }
    std::sort(out.f.begin(), out.f.end());
    return out;
}

// --- thin triangles -----------------------------------------------------------

struct TriangleDeltaOptions {
    size_t geodesic_cap = 10'000;  // per pair
};

struct TriangleDeltaReport {
    int delta = 0;
    std::array<int, 3> witness{-1, -1, -1};
    bool truncated = false;
    uint64_t triangles = 0;
};

namespace detail {

// Cache of geodesic vertex lists per unordered pair, plus the table
// maxdist(pair, p) = max over geodesics of dist(p, geodesic).
class GeodesicPairCache {
public:
    GeodesicPairCache(const LabeledGraph& g, const std::vector<std::vector<int>>& dist,
                      size_t cap)
        : g_(g), dist_(dist), cap_(cap), n_(g.vertex_count()) {}

    const std::vector<Path>& paths(int x, int y) {
        auto& slot = cache_[key(x, y)];
        if (!slot) {
            auto geos = geodesics_between(g_, std::min(x, y), std::max(x, y), cap_);
            truncated_ = truncated_ || geos.truncated;
            slot = std::move(geos.paths);
        }
        return *slot;
    }

    // max over geodesics x..y of min over path vertices of d(p, .)
    const std::vector<int>& maxdist_row(int x, int y) {
        auto& slot = maxdist_[key(x, y)];
        if (!slot) {
            const auto& ps = paths(x, y);
            std::vector<int> row(size_t(n_), 0);
            for (int p = 0; p < n_; ++p) {
                int best = 0;
                for (const auto& path : ps) {
                    int m = kUnreachable;
                    for (int v : path) m = std::min(m, dist_[size_t(p)][size_t(v)]);
                    best = std::max(best, m);
                }
                row[size_t(p)] = best;
            }
            slot = std::move(row);
        }
        return *slot;
    }

    bool truncated() const { return truncated_; }

private:
    int64_t key(int x, int y) const {
        return int64_t(std::min(x, y)) * n_ + std::max(x, y);
    }

    const LabeledGraph& g_;
    const std::vector<std::vector<int>>& dist_;
    size_t cap_;
    int n_;
    std::map<int64_t, std::optional<std::vector<Path>>> cache_;
    std::map<int64_t, std::optional<std::vector<int>>> maxdist_;
    bool truncated_ = false;
};

}  // namespace detail

// Largest one-sided Hausdorff defect over the sampled geodesic
// triangles: the max over triangles, sides and side points p of
// dist(p, union of the other two sides), maximized over all geodesic
// choices per side. Trees give 0; growth with graph size signals
// non-hyperbolicity.
inline TriangleDeltaReport thin_triangle_delta(const LabeledGraph& g,
                                               const std::vector<std::array<int, 3>>& triples,
                                               const TriangleDeltaOptions& opts = {}) {
    auto dist = all_pairs_distances(g);
    detail::GeodesicPairCache cache(g, dist, opts.geodesic_cap);
    TriangleDeltaReport report;
    for (const auto& t : triples) {
        auto [x, y, z] = t;
        if (x == y || y == z || x == z) continue;
        ++report.triangles;
        for (int side = 0; side < 3; ++side) {
            int sa = t[size_t(side)], sb = t[size_t((side + 1) % 3)], sc = t[size_t((side + 2) % 3)];
            const auto& other1 = cache.maxdist_row(sb, sc);
            const auto& other2 = cache.maxdist_row(sa, sc);
            for (const auto& path : cache.paths(sa, sb)) {
                for (int p : path) {
                    int defect = std::min(other1[size_t(p)], other2[size_t(p)]);
                    if (defect > report.delta) {
                        report.delta = defect;
                        report.witness = t;
                    }
                }
            }
        }
    }
    report.truncated = cache.truncated();
    return report;
}

inline TriangleDeltaReport thin_triangle_delta_exhaustive(const LabeledGraph& g,
                                                          const TriangleDeltaOptions& opts = {}) {
    std::vector<std::array<int, 3>> triples;
    const int n = g.vertex_count();
    triples.reserve(size_t(n) * size_t(n) * size_t(n) / 6);
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y)
            for (int z = y + 1; z < n; ++z) triples.push_back({x, y, z});
    return thin_triangle_delta(g, triples, opts);
}

// --- alt-hyperbolicity --------------------------------------------------------

struct AltHyperbolicityReport {
    EdgeId e;
    bool found = false;
    std::vector<EdgeId> f;   // witness set with u_F^2 inside u_e
    int delta = 0;           // 1 + max distance from e to the vertices of f
    int witness_radius = 0;  // ring index at which the witness appeared
};

// For each probe edge e, searches for a finite edge set F with
// u_F^2 contained in u_e, growing F in rings around e: first {e} alone,
// then all edges within ring distance k of e. The verified property is
// checked by an exhaustive triple scan, restricted to vertices within
// `trusted_depth` of vertex 0 when that is set (boundary vertices of a
// truncated ball can manufacture spurious unique geodesics). From a
// found F the report derives delta = 1 + max dist(e, F^0).
inline std::vector<AltHyperbolicityReport> alt_hyperbolicity_delta(
    const LabeledGraph& g, const std::vector<EdgeId>& probe_edges, int max_radius = 3,
    int trusted_depth = -1) {
    auto dist = all_pairs_distances(g);
    const int n = g.vertex_count();
    std::vector<int> scan_vertices;
    for (int v = 0; v < n; ++v)
        if (trusted_depth < 0 || dist[0][size_t(v)] <= trusted_depth) scan_vertices.push_back(v);
    auto all_edges = g.edges();
    std::map<EdgeId, BitMatrix> small_cache;
    auto small_of = [&](EdgeId e) -> const BitMatrix& {
        auto it = small_cache.find(e);
        if (it == small_cache.end())
            it = small_cache.emplace(e, smallness_matrix(g, e, dist)).first;
        return it->second;
    };
    auto edge_dist = [&](EdgeId a, EdgeId b) {
        return std::min({dist[size_t(a.first)][size_t(b.first)],
                         dist[size_t(a.first)][size_t(b.second)],
                         dist[size_t(a.second)][size_t(b.first)],
                         dist[size_t(a.second)][size_t(b.second)]});
    };
    auto vertex_dist = [&](EdgeId e, int w) {
        return std::min(dist[size_t(e.first)][size_t(w)], dist[size_t(e.second)][size_t(w)]);
    };

    std::vector<AltHyperbolicityReport> out;
    for (const auto& e : probe_edges) {
        AltHyperbolicityReport rep;
        rep.e = e;
        const BitMatrix& small_e = small_of(e);
        for (int k = 0; k <= max_radius && !rep.found; ++k) {
            std::vector<EdgeId> f;
            if (k == 0) {
                f.push_back(e);
            } else {
                for (const auto& cand : all_edges)
                    if (edge_dist(e, cand) <= k - 1) f.push_back(cand);
            }
            BitMatrix m_f = small_of(f.front());
            for (size_t i = 1; i < f.size(); ++i) m_f.and_with(small_of(f[i]));
            bool ok = true;
            if (trusted_depth < 0) {
                for (int x = 0; x < n && ok; ++x) {
                    for (int z = 0; z < n && ok; ++z) {
                        if (small_e.get(x, z)) continue;
                        if (m_f.rows_intersect(x, z)) ok = false;
                    }
                }
            } else {
                for (int x : scan_vertices) {
                    for (int z : scan_vertices) {
                        if (small_e.get(x, z)) continue;
                        for (int y : scan_vertices)
                            if (m_f.get(x, y) && m_f.get(y, z)) {
                                ok = false;
                                break;
                            }
                        if (!ok) break;
                    }
                    if (!ok) break;
                }
            }
            if (ok) {
                rep.found = true;
                rep.f = f;
                rep.witness_radius = k;
                int far = 0;
                for (const auto& fe : f)
                    far = std::max({far, vertex_dist(e, fe.first), vertex_dist(e, fe.second)});
                rep.delta = 1 + far;
            }
        }
        out.push_back(std::move(rep));
    }
    return out;
}

// --- horocycle diagnostic -----------------------------------------------------

struct HorocycleCandidate {
    Path ray1, ray2;
    int cluster = 0;
    bool closed_up = false;  // equal endpoints, rays share only the base
};

struct HorocycleReport {
    size_t rays = 0;
    size_t clusters = 0;
    std::vector<HorocycleCandidate> candidates;
    bool truncated = false;
};

// Finite shadow of the no-horocycles property: enumerate geodesic rays
// from the base to the depth-`ray_depth` sphere, cluster their endpoints
// by Floyd distance <= eps, and flag ray pairs in one cluster whose
// union closes up into a geodesic. An empty report is consistent with
// the property at this scale; the scan can neither prove nor refute it.
template <class S>
HorocycleReport horocycle_scan(const LabeledGraph& g, int base, const ScalingFunction& f,
                               int ray_depth, const S& cluster_eps, size_t cap = 100'000,
                               size_t max_candidates = 100) {
    auto clusters = sphere_clusters<S>(g, base, f, ray_depth, cluster_eps);
    HorocycleReport report;
    report.clusters = clusters.clusters.size();
    auto dist = bfs_distances(g, base);
    std::map<int, std::vector<Path>> rays_to;  // endpoint -> rays
    for (int p : clusters.sphere) {
        auto geos = geodesics_between(g, base, p, cap);
        report.truncated = report.truncated || geos.truncated;
        report.rays += geos.paths.size();
        rays_to[p] = std::move(geos.paths);
    }
    auto share_interior = [](const Path& r1, const Path& r2) {
        std::set<int> s1(r1.begin() + 1, r1.end() - 1);
        for (size_t i = 1; i + 1 < r2.size(); ++i)
            if (s1.count(r2[i])) return true;
        return false;
    };
    auto dist_matrix_pair = [&](int p, int q) { return bfs_distances(g, p)[size_t(q)]; };
    for (int ci = 0; ci < int(clusters.clusters.size()); ++ci) {
        const auto& members = clusters.clusters[size_t(ci)];
        for (size_t i = 0; i < members.size(); ++i) {
            for (size_t j = i; j < members.size(); ++j) {
                int p = members[i], q = members[j];
                const auto& rp = rays_to[p];
                const auto& rq = rays_to[q];
                if (p == q) {
                    // distinct rays to one endpoint closing into a simple cycle
                    for (size_t ri = 0; ri < rp.size(); ++ri) {
                        for (size_t rj = ri + 1; rj < rp.size(); ++rj) {
                            if (rp[ri].size() < 3 || share_interior(rp[ri], rp[rj])) continue;
                            if (report.candidates.size() >= max_candidates) {
                                report.truncated = true;
                                break;
                            }
                            report.candidates.push_back({rp[ri], rp[rj], ci, true});
                        }
                    }
                } else {
                    // union through the base is itself a geodesic
                    if (dist_matrix_pair(p, q) != 2 * ray_depth) continue;
                    if (report.candidates.size() >= max_candidates) {
                        report.truncated = true;
                        continue;
                    }
                    if (!rp.empty() && !rq.empty())
                        report.candidates.push_back({rp.front(), rq.front(), ci, false});
                }
            }
        }
    }
    (void)dist;
    return report;
}

}  // namespace ggt
