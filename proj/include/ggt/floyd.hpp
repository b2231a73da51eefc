#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <vector>

#include "ggt/errors.hpp"
#include "ggt/graph.hpp"

namespace ggt {

using Rational = boost::multiprecision::cpp_rational;

inline std::string rational_to_string(const Rational& r) {
    std::string num = numerator(r).str();
    if (denominator(r) == 1) return num;
    return num + "/" + denominator(r).str();
}

inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(text));
        boost::multiprecision::cpp_int num(text.substr(0, slash));
        boost::multiprecision::cpp_int den(text.substr(slash + 1));
        if (den == 0) throw config_error("zero denominator in '" + text + "'");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw config_error("cannot parse rational '" + text + "'");
    }
}

// Floyd scaling function: a summable sequence f_n with a certified ratio
// bound 1 >= f_{n+1}/f_n >= lambda. Two kinds are supported:
//   geometric   f_n = mu^n          (0 < mu < 1, lambda = mu, exact rationals)
//   polynomial  f_n = (1+n)^(-s)    (s > 1, lambda = 2^(-s), floating point)
struct ScalingFunction {
    enum class Kind { Geometric, Polynomial };

    Kind kind = Kind::Geometric;
    Rational mu = Rational(1, 2);  // geometric ratio
    double exponent = 2.0;         // polynomial exponent s
    std::optional<Rational> lambda_override;

    static ScalingFunction geometric(Rational mu) {
        if (mu <= 0 || mu >= 1) throw config_error("geometric ratio must lie in (0,1)");
        ScalingFunction f;
        f.kind = Kind::Geometric;
        f.mu = std::move(mu);
        return f;
    }

    static ScalingFunction polynomial(double s) {
        if (!(s > 1.0)) throw config_error("polynomial exponent must be > 1");
        ScalingFunction f;
        f.kind = Kind::Polynomial;
        f.exponent = s;
        return f;
    }

    // A caller-certified ratio bound; must not beat the analytic one.
    void set_lambda_override(Rational lambda) {
        if (lambda <= 0 || lambda > 1) throw config_error("lambda must lie in (0,1]");
        if (kind == Kind::Geometric && lambda > mu)
            throw config_error("lambda override exceeds the certified geometric ratio");
        if (kind == Kind::Polynomial && double(lambda) > std::pow(2.0, -exponent))
            throw config_error("lambda override exceeds the certified polynomial bound");
        lambda_override = std::move(lambda);
    }

    bool exact() const { return kind == Kind::Geometric; }

    // Certified ratio bound. Geometric: f_{n+1}/f_n = mu. Polynomial:
    // f_{n+1}/f_n = ((n+1)/(n+2))^s >= (1/2)^s.
    double lambda_real() const {
        if (lambda_override) return double(*lambda_override);
        return kind == Kind::Geometric ? double(mu) : std::pow(2.0, -exponent);
    }
    Rational lambda_exact() const {
        if (lambda_override) return *lambda_override;
        if (kind != Kind::Geometric)
            throw config_error("exact arithmetic requires a geometric scaling function");
        return mu;
    }

    Rational weight_exact(int n) const {
        if (kind != Kind::Geometric)
            throw config_error("exact arithmetic requires a geometric scaling function");
        Rational w = 1;
        for (int i = 0; i < n; ++i) w *= mu;
        return w;
    }

    double weight_real(int n) const {
        return kind == Kind::Geometric ? std::pow(double(mu), n)
                                       : std::pow(1.0 + n, -exponent);
    }

    // Truncated tail sum f_a + ... + f_b.
    Rational tail_sum_exact(int a, int b) const {
        Rational s = 0;
        for (int n = std::max(a, 0); n <= b; ++n) s += weight_exact(n);
        return s;
    }
    double tail_sum_real(int a, int b) const {
        double s = 0;
        for (int n = std::max(a, 0); n <= b; ++n) s += weight_real(n);
        return s;
    }
};

template <class S>
S scaling_weight(const ScalingFunction& f, int n);

template <>
inline Rational scaling_weight<Rational>(const ScalingFunction& f, int n) {
    return f.weight_exact(n);
}
template <>
inline double scaling_weight<double>(const ScalingFunction& f, int n) {
    return f.weight_real(n);
}

// Per-edge Floyd weights based at a vertex: edge e gets length
// f(d(base, e)) where d(base, e) is the distance to the nearer endpoint.
template <class S>
struct FloydWeights {
    int base = 0;
    std::vector<EdgeId> edges;  // sorted
    std::vector<S> weight;      // aligned with edges

    S weight_of(EdgeId e) const {
        auto it = std::lower_bound(edges.begin(), edges.end(), e);
        if (it == edges.end() || *it != e) throw config_error("edge not in graph");
        return weight[size_t(it - edges.begin())];
    }
};

template <class S>
FloydWeights<S> floyd_weights(const LabeledGraph& g, int base, const ScalingFunction& f) {
    FloydWeights<S> out;
    out.base = base;
    out.edges = g.edges();
    auto dist = bfs_distances(g, base);
    out.weight.reserve(out.edges.size());
    // cache per distance value
    std::vector<S> values;
    for (const auto& [a, b] : out.edges) {
        int d = std::min(dist[size_t(a)], dist[size_t(b)]);
        if (d == kUnreachable) throw config_error("graph must be connected");
        while (int(values.size()) <= d) values.push_back(scaling_weight<S>(f, int(values.size())));
        out.weight.push_back(values[size_t(d)]);
    }
    return out;
}

// Single-source Floyd distances by Dijkstra.
template <class S>
std::vector<S> floyd_distances_from(const LabeledGraph& g, const FloydWeights<S>& w, int src) {
    const size_t n = size_t(g.vertex_count());
    std::vector<S> dist(n, S(-1));
    std::vector<char> done(n, 0);
    using Item = std::pair<S, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    dist[size_t(src)] = S(0);
    queue.push({S(0), src});
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (done[size_t(v)]) continue;
        done[size_t(v)] = 1;
        for (int u : g.neighbors(v)) {
            S nd = d + w.weight_of(make_edge(v, u));
            if (!done[size_t(u)] && (dist[size_t(u)] < S(0) || nd < dist[size_t(u)])) {
                dist[size_t(u)] = nd;
                queue.push({nd, u});
            }
        }
    }
    return dist;
}

// Floyd distance delta_{base,f}(a, b).
template <class S>
S floyd_distance(const LabeledGraph& g, int base, const ScalingFunction& f, int a, int b) {
    auto w = floyd_weights<S>(g, base, f);
    auto dist = floyd_distances_from(g, w, a);
    if (dist[size_t(b)] < S(0)) throw config_error("vertices are in different components");
    return dist[size_t(b)];
}

// --- base change -----------------------------------------------------------

struct BaseChangeViolation {
    int a = 0, b = 0;
    std::string delta_u, delta_v;  // printed values
};

struct BaseChangeReport {
    int base_u = 0, base_v = 0;
    int base_distance = 0;
    size_t pairs_checked = 0;
    std::vector<BaseChangeViolation> violations;
    // minimum of delta_u(a,b) / delta_v(a,b) over the checked pairs
    double min_ratio = std::numeric_limits<double>::infinity();
    bool exact = false;
};

// Checks delta_u(a,b) >= lambda^{d(u,v)} * delta_v(a,b) on the supplied
// pairs. The inequality is a theorem for any scaling function with ratio
// bound lambda, so a violation signals an implementation bug; it is
// reported rather than thrown to keep diagnostics inspectable.
inline BaseChangeReport base_change_check(const LabeledGraph& g, const ScalingFunction& f, int u,
                                          int v, const std::vector<std::pair<int, int>>& pairs) {
    BaseChangeReport report;
    report.base_u = u;
    report.base_v = v;
    report.base_distance = bfs_distances(g, u)[size_t(v)];
    report.exact = f.exact();
    if (f.exact()) {
        Rational lam = f.lambda_exact();
        Rational factor = 1;
        for (int i = 0; i < report.base_distance; ++i) factor *= lam;
        auto wu = floyd_weights<Rational>(g, u, f);
        auto wv = floyd_weights<Rational>(g, v, f);
        std::map<int, std::pair<std::vector<Rational>, std::vector<Rational>>> by_source;
        for (auto [a, b] : pairs) {
            auto it = by_source.find(a);
            if (it == by_source.end())
                it = by_source
                         .emplace(a, std::make_pair(floyd_distances_from(g, wu, a),
                                                    floyd_distances_from(g, wv, a)))
                         .first;
            Rational delta_u = it->second.first[size_t(b)];
            Rational delta_v = it->second.second[size_t(b)];
            ++report.pairs_checked;
            if (a == b) continue;
            report.min_ratio = std::min(report.min_ratio, double(delta_u / delta_v));
            if (delta_u < factor * delta_v)
                report.violations.push_back(
                    {a, b, rational_to_string(delta_u), rational_to_string(delta_v)});
        }
    } else {
        double lam = f.lambda_real();
        double factor = std::pow(lam, report.base_distance);
        auto wu = floyd_weights<double>(g, u, f);
        auto wv = floyd_weights<double>(g, v, f);
        std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_source;
        for (auto [a, b] : pairs) {
            auto it = by_source.find(a);
            if (it == by_source.end())
                it = by_source
                         .emplace(a, std::make_pair(floyd_distances_from(g, wu, a),
                                                    floyd_distances_from(g, wv, a)))
                         .first;
            double delta_u = it->second.first[size_t(b)];
            double delta_v = it->second.second[size_t(b)];
            ++report.pairs_checked;
            if (a == b) continue;
            report.min_ratio = std::min(report.min_ratio, delta_u / delta_v);
            if (delta_u < factor * delta_v - 1e-12)
                report.violations.push_back({a, b, std::to_string(delta_u), std::to_string(delta_v)});
        }
    }
    return report;
}

struct BaseChangeSweep {
    size_t base_pairs = 0;
    size_t vertex_pairs = 0;
    uint64_t checks = 0;
    size_t violations = 0;
    BaseChangeViolation first_violation;
};

namespace detail {

// Tree layout rooted at vertex 0: parent pointers and depths, plus LCA.
struct TreeIndex {
    std::vector<int> parent;
    std::vector<int> depth;

    explicit TreeIndex(const LabeledGraph& g) {
        if (!is_tree(g)) throw config_error("graph is not a tree");
        const size_t n = size_t(g.vertex_count());
        parent.assign(n, -1);
        depth.assign(n, 0);
        std::deque<int> queue{0};
        std::vector<char> seen(n, 0);
        seen[0] = 1;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int w : g.neighbors(v)) {
                if (!seen[size_t(w)]) {
                    seen[size_t(w)] = 1;
                    parent[size_t(w)] = v;
                    depth[size_t(w)] = depth[size_t(v)] + 1;
                    queue.push_back(w);
                }
            }
        }
    }

    int lca(int a, int b) const {
        while (depth[size_t(a)] > depth[size_t(b)]) a = parent[size_t(a)];
        while (depth[size_t(b)] > depth[size_t(a)]) b = parent[size_t(b)];
        while (a != b) {
            a = parent[size_t(a)];
            b = parent[size_t(b)];
        }
        return a;
    }
};

}  // namespace detail

// Exhaustive base-change sweep over a tree: checks
//     delta_u(a,b) >= lambda^{d(u,v)} * delta_v(a,b)
// for every vertex pair (a,b) and every ordered base pair (u,v) with
// d(u,v) <= max_base_dist. Exact rational arithmetic: with mu = p/q all
// Floyd path lengths are integer multiples of q^-D (D = eccentricity
// bound), so the sweep runs on scaled 64-bit integers. Requires a tree
// and a geometric scaling function; bounds are validated up front.
inline BaseChangeSweep base_change_exhaustive(const LabeledGraph& g, const ScalingFunction& f,
                                              int max_base_dist) {
    if (!f.exact()) throw config_error("exhaustive sweep requires a geometric scaling function");
    detail::TreeIndex tree(g);
    const int n = g.vertex_count();
    const auto dist = all_pairs_distances(g);
    int diameter = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) diameter = std::max(diameter, dist[size_t(a)][size_t(b)]);

    const int64_t p = int64_t(numerator(f.mu));
    const int64_t q = int64_t(denominator(f.mu));
    const Rational lambda = f.lambda_exact();
    const int64_t pl = int64_t(numerator(lambda));
    const int64_t ql = int64_t(denominator(lambda));
    // scaled weight of an edge at distance d: p^d * q^(D-d); path sums of
    // at most `diameter` edges must fit with the lambda^max_base_dist
    // factor applied on top
    const int D = diameter;
    double bound = std::pow(double(std::max(p, q)), D) * double(D) *
                   std::pow(double(std::max(pl, ql)), max_base_dist);
    if (bound > 9e17) throw config_error("sweep parameters overflow 64-bit exact arithmetic");
    std::vector<int64_t> pow_p(size_t(D + 1), 1), pow_q(size_t(D + 1), 1);
    std::vector<int64_t> pow_pl(size_t(max_base_dist + 1), 1), pow_ql(size_t(max_base_dist + 1), 1);
    for (int i = 1; i <= D; ++i) {
        pow_p[size_t(i)] = pow_p[size_t(i - 1)] * p;
        pow_q[size_t(i)] = pow_q[size_t(i - 1)] * q;
    }
    for (int i = 1; i <= max_base_dist; ++i) {
        pow_pl[size_t(i)] = pow_pl[size_t(i - 1)] * pl;
        pow_ql[size_t(i)] = pow_ql[size_t(i - 1)] * ql;
    }
    auto weight_scaled = [&](int d) { return pow_p[size_t(d)] * pow_q[size_t(D - d)]; };

    // weighted depth from the root, per base vertex: delta_w(a, b) =
    // depth_w(a) + depth_w(b) - 2 * depth_w(lca(a, b))
    std::vector<std::vector<int64_t>> wdepth(size_t(n), std::vector<int64_t>(size_t(n), 0));
    for (int w = 0; w < n; ++w) {
        const auto& dw = dist[size_t(w)];
        std::deque<int> queue{0};
        std::vector<char> seen(size_t(n), 0);
        seen[0] = 1;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int x : g.neighbors(v)) {
                if (seen[size_t(x)]) continue;
                seen[size_t(x)] = 1;
                int de = std::min(dw[size_t(v)], dw[size_t(x)]);
                wdepth[size_t(w)][size_t(x)] = wdepth[size_t(w)][size_t(v)] + weight_scaled(de);
                queue.push_back(x);
            }
        }
    }

    // ordered base pairs with d(u,v) <= max_base_dist
    std::vector<std::array<int, 3>> base_pairs;  // u, v, d
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (dist[size_t(u)][size_t(v)] <= max_base_dist)
                base_pairs.push_back({u, v, dist[size_t(u)][size_t(v)]});

    BaseChangeSweep sweep;
    sweep.base_pairs = base_pairs.size();
    std::vector<int64_t> delta(size_t(n), 0);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            ++sweep.vertex_pairs;
            int l = tree.lca(a, b);
            for (int w = 0; w < n; ++w)
                delta[size_t(w)] = wdepth[size_t(w)][size_t(a)] + wdepth[size_t(w)][size_t(b)] -
                                   2 * wdepth[size_t(w)][size_t(l)];
            for (const auto& [u, v, d] : base_pairs) {
                ++sweep.checks;
                // delta_u >= lambda^d * delta_v  <=>  delta_u * ql^d >= delta_v * pl^d
                if (delta[size_t(u)] * pow_ql[size_t(d)] < delta[size_t(v)] * pow_pl[size_t(d)]) {
                    if (sweep.violations == 0)
                        sweep.first_violation = {a, b, std::to_string(delta[size_t(u)]),
                                                 std::to_string(delta[size_t(v)])};
                    ++sweep.violations;
                }
            }
        }
    }
    return sweep;
}

// --- geodesic ray tails ------------------------------------------------------

template <class S>
struct RayTailReport {
    S diameter{};
    int offset = 0;     // c with d(base, ray[i]) >= i - c for all i
    S bound{};          // 2 * sum of f_n over the truncated tail range
    int tail_size = 0;
};

// Floyd diameter of ray[k..end]. The ray must be a geodesic path. The
// diameter is non-increasing in k and obeys the summable-tail bound,
// which is the finite shadow of ray convergence in the Floyd completion.
template <class S>
RayTailReport<S> ray_tail_diameter(const LabeledGraph& g, int base, const ScalingFunction& f,
                                   const Path& ray, int k) {
    if (ray.empty() || k < 0 || k >= int(ray.size()))
        throw config_error("tail start index out of range");
    if (!path_is_geodesic(g, ray)) throw config_error("ray is not a geodesic path");
    auto dist_base = bfs_distances(g, base);
    RayTailReport<S> report;
    int c = 0;
    for (int i = 0; i < int(ray.size()); ++i)
        c = std::max(c, i - dist_base[size_t(ray[size_t(i)])]);
    report.offset = c + 1;  // edges below ray[i] sit at distance >= i - c - 1
    report.tail_size = int(ray.size()) - k;

    auto w = floyd_weights<S>(g, base, f);
    S diam{};
    for (int i = k; i < int(ray.size()); ++i) {
        auto d = floyd_distances_from(g, w, ray[size_t(i)]);
        for (int j = i + 1; j < int(ray.size()); ++j) diam = std::max(diam, d[size_t(ray[size_t(j)])]);
    }
    report.diameter = diam;

    int max_edge_dist = 0;
    {
        auto db = dist_base;
        for (const auto& [a, b] : g.edges())
            max_edge_dist = std::max(max_edge_dist, std::min(db[size_t(a)], db[size_t(b)]));
    }
    S tail{};
    for (int nn = std::max(0, k - report.offset); nn <= max_edge_dist; ++nn)
        tail += scaling_weight<S>(f, nn);
    report.bound = tail + tail;
    return report;
}

// --- sphere clusters ---------------------------------------------------------

struct SphereClusters {
    std::vector<int> sphere;            // vertices at the given depth
    std::vector<std::vector<int>> clusters;  // partition of `sphere`
};

// Groups sphere vertices whose pairwise Floyd distance is <= eps
// (transitive closure). Clusters are the finite shadow of boundary
// points of the Floyd completion.
template <class S>
SphereClusters sphere_clusters(const LabeledGraph& g, int base, const ScalingFunction& f,
                               int depth, const S& eps) {
    auto dist = bfs_distances(g, base);
    SphereClusters out;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (dist[size_t(v)] == depth) out.sphere.push_back(v);
    const size_t m = out.sphere.size();
    std::vector<int> cluster_of(m);
    for (size_t i = 0; i < m; ++i) cluster_of[i] = int(i);
    std::function<int(int)> find = [&](int x) {
        while (cluster_of[size_t(x)] != x) {
            cluster_of[size_t(x)] = cluster_of[size_t(cluster_of[size_t(x)])];
            x = cluster_of[size_t(x)];
        }
        return x;
    };
    auto w = floyd_weights<S>(g, base, f);
    for (size_t i = 0; i < m; ++i) {
        auto d = floyd_distances_from(g, w, out.sphere[i]);
        for (size_t j = i + 1; j < m; ++j) {
            if (d[size_t(out.sphere[j])] <= eps) {
                int ri = find(int(i)), rj = find(int(j));
                if (ri != rj) cluster_of[size_t(rj)] = ri;
            }
        }
    }
    std::map<int, std::vector<int>> groups;
    for (size_t i = 0; i < m; ++i) groups[find(int(i))].push_back(out.sphere[i]);
    for (auto& [root, members] : groups) out.clusters.push_back(members);
    return out;
}

}  // namespace ggt
