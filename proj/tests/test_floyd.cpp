#include <catch2/catch_amalgamated.hpp>

#include "ggt/floyd.hpp"
#include "ggt/graph.hpp"

using namespace ggt;

namespace {

int vertex(const LabeledGraph& g, const Basis& basis, const char* w) {
    int v = find_group_vertex(g, parse_word(basis, w));
    REQUIRE(v >= 0);
    return v;
}

}  // namespace

TEST_CASE("scaling functions certify their ratio bound") {
    auto geo = ScalingFunction::geometric(Rational(1, 2));
    CHECK(geo.lambda_exact() == Rational(1, 2));
    for (int n = 0; n < 60; ++n) {
        Rational ratio = geo.weight_exact(n + 1) / geo.weight_exact(n);
        CHECK(ratio <= 1);
        CHECK(ratio >= geo.lambda_exact());
    }
    auto poly = ScalingFunction::polynomial(2.0);
    CHECK(poly.lambda_real() == Catch::Approx(0.25));
    for (int n = 0; n < 60; ++n) {
        double ratio = poly.weight_real(n + 1) / poly.weight_real(n);
        CHECK(ratio <= 1.0 + 1e-15);
        CHECK(ratio >= poly.lambda_real() - 1e-15);
    }
    CHECK_THROWS_AS(ScalingFunction::geometric(Rational(3, 2)), config_error);
    CHECK_THROWS_AS(ScalingFunction::polynomial(1.0), config_error);
    CHECK_THROWS_AS(poly.lambda_exact(), config_error);
}

TEST_CASE("lambda overrides weaken but never break the bound") {
    auto f = ScalingFunction::geometric(Rational(1, 2));
    f.set_lambda_override(Rational(1, 3));
    CHECK(f.lambda_exact() == Rational(1, 3));
    auto sweep = base_change_exhaustive(cayley_ball(Basis::free_group(2), 3), f, 2);
    CHECK(sweep.violations == 0);

    auto g = ScalingFunction::geometric(Rational(1, 2));
    CHECK_THROWS_AS(g.set_lambda_override(Rational(2, 3)), config_error);
    CHECK_THROWS_AS(g.set_lambda_override(Rational(0)), config_error);
}

TEST_CASE("rational parsing round-trips") {
    CHECK(rational_to_string(parse_rational("1/2")) == "1/2");
    CHECK(rational_to_string(parse_rational("3")) == "3");
    CHECK(rational_to_string(parse_rational("4/6")) == "2/3");
    CHECK_THROWS_AS(parse_rational("a/b"), config_error);
    CHECK_THROWS_AS(parse_rational("1/0"), config_error);
}

TEST_CASE("floyd distances on the rank-2 tree match hand values") {
    auto basis = Basis::free_group(2);
    auto ball = cayley_ball(basis, 3);
    auto f = ScalingFunction::geometric(Rational(1, 2));
    int base = vertex(ball, basis, "");
    int a = vertex(ball, basis, "a");
    int b = vertex(ball, basis, "b");
    int aa = vertex(ball, basis, "a a");
    CHECK(floyd_distance<Rational>(ball, base, f, a, b) == Rational(2));
    CHECK(floyd_distance<Rational>(ball, base, f, a, a) == Rational(0));
    CHECK(floyd_distance<Rational>(ball, base, f, a, aa) == Rational(1, 2));
}

TEST_CASE("floyd distance is a metric bounded by f(0) times graph distance") {
    auto basis = Basis::free_group(2);
    auto ball = cayley_ball(basis, 3);
    auto f = ScalingFunction::geometric(Rational(1, 2));
    auto w = floyd_weights<Rational>(ball, 0, f);
    const int n = ball.vertex_count();
    std::vector<std::vector<Rational>> d;
    for (int v = 0; v < n; ++v) d.push_back(floyd_distances_from(ball, w, v));
    auto graph_dist = all_pairs_distances(ball);
    for (int x = 0; x < n; ++x) {
        CHECK(d[size_t(x)][size_t(x)] == 0);
        for (int y = 0; y < n; ++y) {
            CHECK(d[size_t(x)][size_t(y)] == d[size_t(y)][size_t(x)]);
            CHECK(d[size_t(x)][size_t(y)] <=
                  Rational(graph_dist[size_t(x)][size_t(y)]) * f.weight_exact(0));
            for (int z = 0; z < n; ++z)
                CHECK(d[size_t(x)][size_t(z)] <= d[size_t(x)][size_t(y)] + d[size_t(y)][size_t(z)]);
        }
    }
}

TEST_CASE("floyd distances never exceed f(0) times graph distance at radius 5") {
    auto basis = Basis::free_group(2);
    auto ball = cayley_ball(basis, 5);
    auto f = ScalingFunction::geometric(Rational(1, 2));
    auto w = floyd_weights<Rational>(ball, 0, f);
    auto graph_dist = all_pairs_distances(ball);
    for (int x = 0; x < ball.vertex_count(); ++x) {
        auto row = floyd_distances_from(ball, w, x);
        for (int y = 0; y < ball.vertex_count(); ++y)
            REQUIRE(row[size_t(y)] <= Rational(graph_dist[size_t(x)][size_t(y)]));
    }
}

TEST_CASE("floyd distance in polynomial mode is a metric within tolerance") {
    auto grid = make_grid(3, 3);
    auto f = ScalingFunction::polynomial(2.0);
    auto w = floyd_weights<double>(grid, 0, f);
    std::vector<std::vector<double>> d;
    for (int v = 0; v < grid.vertex_count(); ++v) d.push_back(floyd_distances_from(grid, w, v));
    for (int x = 0; x < grid.vertex_count(); ++x)
        for (int y = 0; y < grid.vertex_count(); ++y) {
            CHECK(d[size_t(x)][size_t(y)] == Catch::Approx(d[size_t(y)][size_t(x)]).margin(1e-12));
            for (int z = 0; z < grid.vertex_count(); ++z)
                CHECK(d[size_t(x)][size_t(z)] <=
                      d[size_t(x)][size_t(y)] + d[size_t(y)][size_t(z)] + 1e-12);
        }
}

TEST_CASE("base change with equal bases is the trivial bound") {
    auto ball = cayley_ball(Basis::free_group(2), 3);
    auto f = ScalingFunction::geometric(Rational(1, 2));
    auto rep = base_change_check(ball, f, 5, 5, {{0, 1}, {1, 2}, {3, 9}});
    CHECK(rep.base_distance == 0);
    CHECK(rep.violations.empty());
    CHECK(rep.min_ratio == 1.0);
}

TEST_CASE("base change holds for adjacent bases with ratio at least lambda") {
    auto basis = Basis::free_group(2);
    auto ball = cayley_ball(basis, 4);
    auto f = ScalingFunction::geometric(Rational(1, 2));
    int u = 0, v = vertex(ball, basis, "a");
    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x < 40; ++x)
        for (int y = x + 1; y < 40; ++y) pairs.push_back({x, y});
    auto rep = base_change_check(ball, f, u, v, pairs);
    CHECK(rep.violations.empty());
    CHECK(rep.min_ratio >= 0.5);
}

TEST_CASE("exhaustive base-change sweep is violation-free on the radius-3 ball") {
    auto ball = cayley_ball(Basis::free_group(2), 3);
    auto f = ScalingFunction::geometric(Rational(1, 2));
    auto sweep = base_change_exhaustive(ball, f, 2);
    CHECK(sweep.base_pairs == 361);
    CHECK(sweep.vertex_pairs == 1378);
    CHECK(sweep.checks == 497458);
    CHECK(sweep.violations == 0);
}

TEST_CASE("the exhaustive sweep agrees with the generic rational route") {
    auto basis = Basis::free_group(2);
    auto ball = cayley_ball(basis, 3);
    auto f = ScalingFunction::geometric(Rational(1, 2));
    // tree-path formula vs Dijkstra: spot check a handful of values
    auto wts = floyd_weights<Rational>(ball, vertex(ball, basis, "a"), f);
    auto d = floyd_distances_from(ball, wts, vertex(ball, basis, "b"));
    CHECK(d[size_t(vertex(ball, basis, "a a"))] ==
          floyd_distance<Rational>(ball, vertex(ball, basis, "a"), f, vertex(ball, basis, "b"),
                                   vertex(ball, basis, "a a")));
    CHECK_THROWS_AS(base_change_exhaustive(make_cycle(6), f, 1), config_error);
    CHECK_THROWS_AS(base_change_exhaustive(ball, ScalingFunction::polynomial(2.0), 1),
                    config_error);
}

TEST_CASE("ray tails shrink like the scaling tail") {
    auto basis = Basis::free_group(1);
    auto ball = cayley_ball(basis, 6);
    auto f = ScalingFunction::geometric(Rational(1, 2));
    Path ray;
    Word w;
    for (int i = 0; i <= 6; ++i) {
        ray.push_back(find_group_vertex(ball, w));
        w = product(w, parse_word(basis, "a"));
    }
    auto rep4 = ray_tail_diameter<Rational>(ball, ray[0], f, ray, 4);
    CHECK(rep4.diameter == Rational(3, 32));
    CHECK(rep4.offset == 1);
    CHECK(rep4.bound == Rational(7, 16));
    CHECK(rep4.diameter <= rep4.bound);

    auto rep6 = ray_tail_diameter<Rational>(ball, ray[0], f, ray, 6);
    CHECK(rep6.diameter == 0);  // single-vertex tail

    Rational last = Rational(1024);
    for (int k = 0; k <= 6; ++k) {
        auto rep = ray_tail_diameter<Rational>(ball, ray[0], f, ray, k);
        CHECK(rep.diameter <= last);
        last = rep.diameter;
    }

    auto rep2 = ray_tail_diameter<Rational>(ball, ray[0], f, ray, 2);
    CHECK(rep4.bound * 2 <= rep2.bound);  // doubling k at least halves the bound

    Path not_geodesic{ray[0], ray[1], ray[0]};
    CHECK_THROWS_AS(ray_tail_diameter<Rational>(ball, ray[0], f, not_geodesic, 0), config_error);
}

TEST_CASE("sphere clusters partition the sphere") {
    auto basis = Basis::free_group(2);
    auto ball = cayley_ball(basis, 4);
    auto f = ScalingFunction::geometric(Rational(1, 2));
    Rational eps = f.tail_sum_exact(2, 16) * 2;
    auto sc = sphere_clusters<Rational>(ball, 0, f, 4, eps);
    CHECK(sc.sphere.size() == 108);
    CHECK(sc.clusters.size() == 12);
    size_t total = 0;
    for (const auto& c : sc.clusters) total += c.size();
    CHECK(total == sc.sphere.size());
}
