#include <catch2/catch_amalgamated.hpp>

#include "trop/io.hpp"
#include "trop/sampling.hpp"

using namespace trop;

namespace {
MetricGraph load(const std::string& name) {
    return load_curve_file(std::string(TROP_TEST_DATA_DIR) + "/" + name);
}
} // namespace

TEST_CASE("curve: loading and validation") {
    SECTION("theta graph round trip") {
        MetricGraph g = load("theta.json");
        REQUIRE(g.num_vertices() == 2);
        REQUIRE(g.num_edges() == 3);
        REQUIRE(g.name() == "theta");
        REQUIRE(g.basepoint() == g.point_at_vertex(g.vertex_index("u")));
    }
    SECTION("nonpositive length") {
        REQUIRE_THROWS_AS(load("bad_zero_length.json"), validation_error);
        REQUIRE_THROWS_WITH(load("bad_zero_length.json"),
                            Catch::Matchers::ContainsSubstring("nonpositive length"));
    }
    SECTION("disconnected") {
        REQUIRE_THROWS_WITH(load("bad_disconnected.json"),
                            Catch::Matchers::ContainsSubstring("disconnected"));
    }
    SECTION("infinite leaf marker rejected") {
        REQUIRE_THROWS_WITH(load("bad_infinite.json"),
                            Catch::Matchers::ContainsSubstring("infinite"));
    }
    SECTION("duplicate ids") {
        REQUIRE_THROWS_WITH(
            load_curve(R"({"vertices":[{"id":"a"},{"id":"a"}],"edges":[]})"),
            Catch::Matchers::ContainsSubstring("duplicate"));
        REQUIRE_THROWS_WITH(
            load_curve(R"({"vertices":[{"id":"a"},{"id":"b"}],
                           "edges":[{"id":"e","tail":"a","head":"b","length":"1"},
                                    {"id":"e","tail":"a","head":"b","length":"1"}]})"),
            Catch::Matchers::ContainsSubstring("duplicate"));
    }
    SECTION("garbage json") {
        REQUIRE_THROWS_AS(load_curve("not json"), validation_error);
        REQUIRE_THROWS_AS(load_curve(R"({"vertices": 3})"), validation_error);
    }
    SECTION("basepoint from file") {
        MetricGraph g = load("path.json");
        REQUIRE(g.basepoint() == g.point_at_vertex(g.vertex_index("q")));
    }
}

TEST_CASE("curve: genus") {
    REQUIRE(load("circle2.json").genus() == 1);
    REQUIRE(load("theta.json").genus() == 2);
    REQUIRE(load("k4.json").genus() == 3);
    REQUIRE(load("path.json").genus() == 0);
    REQUIRE(load("dumbbell.json").genus() == 2);
}

TEST_CASE("curve: canonical divisor") {
    SECTION("circle has empty K") {
        MetricGraph g = load("circle2.json");
        REQUIRE(g.canonical_divisor().empty());
    }
    SECTION("theta graph K = u + v") {
        MetricGraph g = load("theta.json");
        Divisor k = g.canonical_divisor();
        REQUIRE(k.degree() == 2);
        REQUIRE(k.coeff(g.point_at_vertex(g.vertex_index("u"))) == 1);
        REQUIRE(k.coeff(g.point_at_vertex(g.vertex_index("v"))) == 1);
    }
    SECTION("K4: coefficient 1 at each vertex, degree 2g-2") {
        MetricGraph g = load("k4.json");
        Divisor k = g.canonical_divisor();
        REQUIRE(k.degree() == 2 * g.genus() - 2);
        REQUIRE(k.degree() == 4);
        for (int32_t v = 0; v < 4; ++v) REQUIRE(k.coeff(g.point_at_vertex(v)) == 1);
    }
    SECTION("deg K = 2g - 2 on random graphs") {
        Sampler rng(7);
        for (int i = 0; i < 25; ++i) {
            MetricGraph g = rng.random_graph();
            REQUIRE(g.canonical_divisor().degree() == 2 * g.genus() - 2);
        }
    }
}

TEST_CASE("curve: point canonicalization") {
    MetricGraph g = load("theta.json");
    int32_t e1 = g.edge_index("e1");
    REQUIRE(g.point_on_edge(e1, Rat(0)) == g.point_at_vertex(g.vertex_index("u")));
    REQUIRE(g.point_on_edge(e1, Rat(1)) == g.point_at_vertex(g.vertex_index("v")));
    REQUIRE(g.point_on_edge(e1, Rat(1, 2)) == g.point_on_edge(e1, Rat(2, 4)));
    REQUIRE_FALSE(g.point_on_edge(e1, Rat(1, 2)) == g.point_on_edge(g.edge_index("e2"), Rat(1, 2)));
    REQUIRE_THROWS_AS(g.point_on_edge(e1, Rat(3, 2)), validation_error);

    SECTION("divisors built from endpoint and vertex forms agree") {
        Divisor a, b;
        a.add(g.point_on_edge(e1, Rat(1)), 2);
        b.add(g.point_at_vertex(g.vertex_index("v")), 2);
        REQUIRE(a == b);
    }
}

TEST_CASE("curve: divisor arithmetic") {
    MetricGraph g = load("theta.json");
    Point u = g.point_at_vertex(0), v = g.point_at_vertex(1);
    Divisor d;
    d.add(u, 2);
    d.add(v, -1);
    d.add(u, -2); // cancels to zero, entry dropped
    REQUIRE(d.support_size() == 1);
    REQUIRE(d.degree() == -1);
    REQUIRE_FALSE(d.is_effective());
    Divisor s = d + d - d;
    REQUIRE(s == d);
    REQUIRE((0 * d).empty());
}

TEST_CASE("curve: subdivision") {
    SECTION("circle cut at the antipode") {
        MetricGraph g = load("circle2.json");
        Refinement ref = subdivide_at(g, {g.point_on_edge(0, Rat(1))});
        REQUIRE(ref.model().num_vertices() == 2);
        REQUIRE(ref.model().num_edges() == 2);
        REQUIRE(ref.model().edge(0).length == 1);
        REQUIRE(ref.model().edge(1).length == 1);
        REQUIRE(ref.model().genus() == 1);
        // maps are mutually inverse on sample points
        Point p = g.point_on_edge(0, Rat(3, 2));
        REQUIRE(ref.map_back(ref.map_point(p)) == p);
    }
    SECTION("subdividing at a vertex is the identity") {
        MetricGraph g = load("theta.json");
        Refinement ref = subdivide_at(g, {g.point_at_vertex(0)});
        REQUIRE(ref.model().num_vertices() == g.num_vertices());
        REQUIRE(ref.model().num_edges() == g.num_edges());
        REQUIRE(ref.model().edge(1).id == "e2");
    }
    SECTION("theta graph cut on e1 keeps genus and K") {
        MetricGraph g = load("theta.json");
        Refinement ref = subdivide_at(g, {g.point_on_edge(g.edge_index("e1"), Rat(1, 2))});
        REQUIRE(ref.model().genus() == 2);
        REQUIRE(ref.map_divisor(g.canonical_divisor()) == ref.model().canonical_divisor());
    }
    SECTION("random subdivision round trips divisors") {
        Sampler rng(11);
        MetricGraph g = load("k4.json");
        for (int i = 0; i < 10; ++i) {
            std::vector<Point> pts = rng.point_set(g, 4);
            Refinement ref = subdivide_at(g, pts);
            Divisor d = rng.divisor(g, 4, 3);
            REQUIRE(ref.map_divisor_back(ref.map_divisor(d)) == d);
            REQUIRE(ref.model().genus() == g.genus());
        }
    }
}
