#include <catch2/catch_amalgamated.hpp>

#include "trop/flow.hpp"
#include "trop/io.hpp"
#include "trop/jacobian.hpp"
#include "trop/sampling.hpp"

using namespace trop;

namespace {
MetricGraph load(const std::string& name) {
    return load_curve_file(std::string(TROP_TEST_DATA_DIR) + "/" + name);
}
} // namespace

TEST_CASE("pl: validation") {
    MetricGraph g = load("circle2.json");
    SECTION("non-integral slope rejected") {
        std::vector<std::vector<PLFunction::Breakpoint>> bps(1);
        bps[0] = {{Rat(0), Rat(0)}, {Rat(2), Rat(1, 2)}};
        REQUIRE_THROWS_WITH(PLFunction(g, std::move(bps)),
                            Catch::Matchers::ContainsSubstring("slope"));
    }
    SECTION("discontinuity at a vertex rejected") {
        std::vector<std::vector<PLFunction::Breakpoint>> bps(1);
        bps[0] = {{Rat(0), Rat(0)}, {Rat(2), Rat(2)}}; // loop: ends disagree
        REQUIRE_THROWS_WITH(PLFunction(g, std::move(bps)),
                            Catch::Matchers::ContainsSubstring("discontinuous"));
    }
    SECTION("breakpoints must span the edge") {
        std::vector<std::vector<PLFunction::Breakpoint>> bps(1);
        bps[0] = {{Rat(0), Rat(0)}, {Rat(1), Rat(1)}};
        REQUIRE_THROWS_AS(PLFunction(g, std::move(bps)), validation_error);
    }
}

TEST_CASE("pl: principal divisors") {
    SECTION("circle: (d_q) = 2q - 2m") {
        MetricGraph g = load("circle2.json");
        PLFunction f = distance_function(g, {g.basepoint()});
        Divisor d = f.principal_divisor(g);
        REQUIRE(d.degree() == 0);
        REQUIRE(d.coeff(g.point_at_vertex(0)) == 2);
        REQUIRE(d.coeff(g.point_on_edge(0, Rat(1))) == -2);
        REQUIRE(d.support_size() == 2);
    }
    SECTION("constant function: empty divisor") {
        MetricGraph g = load("theta.json");
        REQUIRE(constant_pl(g, Rat(5)).principal_divisor(g).empty());
    }
    SECTION("theta graph: (d_u) = 3u - 3v") {
        MetricGraph g = load("theta.json");
        PLFunction f = distance_function(g, {g.point_at_vertex(g.vertex_index("u"))});
        Divisor d = f.principal_divisor(g);
        REQUIRE(d.coeff(g.point_at_vertex(g.vertex_index("u"))) == 3);
        REQUIRE(d.coeff(g.point_at_vertex(g.vertex_index("v"))) == -3);
        REQUIRE(d.degree() == 0);
    }
    SECTION("random PL functions have degree-0 principal divisors") {
        Sampler rng(23);
        for (int i = 0; i < 20; ++i) {
            MetricGraph g = rng.random_graph();
            PLFunction f = rng.pl_function(g);
            REQUIRE(f.principal_divisor(g).degree() == 0);
        }
    }
}

TEST_CASE("jacobian: abel-jacobi basics") {
    MetricGraph g = load("circle2.json");
    GramForm form = gram_matrix(g);
    SECTION("empty divisor maps to zero") {
        REQUIRE(abel_jacobi(g, form, Divisor()) == JacPoint{Rat(0)});
    }
    SECTION("m - q maps to the half period") {
        Divisor d;
        d.add(g.point_on_edge(0, Rat(1)), 1);
        d.add(g.basepoint(), -1);
        REQUIRE(abel_jacobi(g, form, d) == JacPoint{Rat(1)});
    }
    SECTION("additivity on random divisors") {
        Sampler rng(29);
        MetricGraph k4 = load("k4.json");
        GramForm f4 = gram_matrix(k4);
        for (int i = 0; i < 10; ++i) {
            Divisor a = rng.divisor(k4, 3, 2), b = rng.divisor(k4, 3, 2);
            JacPoint lhs = abel_jacobi(k4, f4, a + b);
            JacPoint rhs = abel_jacobi(k4, f4, a) + abel_jacobi(k4, f4, b);
            REQUIRE(jac_equal(f4, lhs, rhs));
        }
    }
    SECTION("factorization through Pic: principal divisors map to 0") {
        Sampler rng(31);
        MetricGraph theta = load("theta.json");
        GramForm ft = gram_matrix(theta);
        for (int i = 0; i < 20; ++i) {
            Divisor p = rng.pl_function(theta).principal_divisor(theta);
            REQUIRE(jac_equal(ft, abel_jacobi(theta, ft, p), jac_zero(ft)));
        }
    }
    SECTION("degree-0 images are basepoint independent") {
        MetricGraph k4 = load("k4.json");
        GramForm f4 = gram_matrix(k4);
        Divisor d;
        d.add(k4.point_on_edge(2, Rat(1, 3)), 1);
        d.add(k4.point_at_vertex(1), -1);
        JacPoint base = abel_jacobi(k4, f4, d);
        for (int32_t v = 0; v < int32_t(k4.num_vertices()); ++v) {
            REQUIRE(jac_equal(f4, base, abel_jacobi(k4, f4, d, k4.point_at_vertex(v))));
            REQUIRE(jac_equal(f4, base, abel_jacobi(k4, f4, d, std::nullopt, v)));
        }
    }
}

TEST_CASE("jacobian: jac_equal decides R^g/Lambda") {
    MetricGraph g = load("circle2.json");
    GramForm form = gram_matrix(g);
    SECTION("reflexive") { REQUIRE(jac_equal(form, {Rat(5, 7)}, {Rat(5, 7)})); }
    SECTION("3 and 1 differ by the period 2") {
        REQUIRE(jac_equal(form, {Rat(3)}, {Rat(1)}));
    }
    SECTION("1 and 0 are distinct") {
        REQUIRE_FALSE(jac_equal(form, {Rat(1)}, {Rat(0)}));
    }
    SECTION("equivalence relation, canonical form as the class key") {
        Sampler rng(37);
        MetricGraph theta = load("theta.json");
        GramForm ft = gram_matrix(theta);
        for (int i = 0; i < 20; ++i) {
            JacPoint x = rng.jac_point(ft), y = rng.jac_point(ft);
            JacPoint xs = x + ft.lattice_coords(rng.lattice_vector(ft));
            REQUIRE(jac_equal(ft, x, xs));
            REQUIRE(jac_canonical(ft, x) == jac_canonical(ft, xs));
            REQUIRE(jac_equal(ft, x, y) == (jac_canonical(ft, x) == jac_canonical(ft, y)));
        }
    }
    SECTION("dimension mismatch is an error") {
        REQUIRE_THROWS_AS(jac_equal(form, {Rat(1), Rat(0)}, {Rat(0)}), validation_error);
    }
}

TEST_CASE("jacobian: lin_equiv") {
    MetricGraph g = load("circle2.json");
    GramForm form = gram_matrix(g);
    Divisor q;
    q.add(g.basepoint(), 1);
    Divisor m;
    m.add(g.point_on_edge(0, Rat(1)), 1);
    SECTION("D ~ D") { REQUIRE(lin_equiv(g, form, q, q)); }
    SECTION("q and the antipode are not equivalent") {
        REQUIRE_FALSE(lin_equiv(g, form, q, m));
    }
    SECTION("degree mismatch short-circuits") {
        REQUIRE_FALSE(lin_equiv(g, form, q, q + q));
    }
    SECTION("D ~ D + (f) for random PL f") {
        Sampler rng(41);
        MetricGraph theta = load("theta.json");
        GramForm ft = gram_matrix(theta);
        for (int i = 0; i < 20; ++i) {
            Divisor d = rng.divisor(theta, 3, 2);
            Divisor p = rng.pl_function(theta).principal_divisor(theta);
            REQUIRE(lin_equiv(theta, ft, d, d + p));
        }
    }
}

TEST_CASE("jacobian: two torsion") {
    SECTION("circle: 0 and the half period") {
        MetricGraph g = load("circle2.json");
        GramForm form = gram_matrix(g);
        auto tt = two_torsion(form);
        REQUIRE(tt.size() == 2);
        REQUIRE(tt[0].point == JacPoint{Rat(0)});
        REQUIRE(tt[1].point == JacPoint{Rat(1)});
    }
    SECTION("tree: the trivial group") {
        MetricGraph g = load("path.json");
        GramForm form = gram_matrix(g);
        auto tt = two_torsion(form);
        REQUIRE(tt.size() == 1);
        REQUIRE(tt[0].point.empty());
    }
    SECTION("theta graph: the four half periods") {
        MetricGraph g = load("theta.json");
        GramForm form = gram_matrix(g);
        auto tt = two_torsion(form);
        REQUIRE(tt.size() == 4);
        REQUIRE(tt[0].point == JacPoint{Rat(0), Rat(0)});
        REQUIRE(tt[1].point == JacPoint{Rat(1), Rat(1, 2)});
        REQUIRE(tt[2].point == JacPoint{Rat(1, 2), Rat(1)});
        REQUIRE(tt[3].point == JacPoint{Rat(3, 2), Rat(3, 2)});
        for (std::size_t i = 0; i < 4; ++i) {
            REQUIRE(jac_equal(form, tt[i].point + tt[i].point, jac_zero(form)));
            for (std::size_t j = i + 1; j < 4; ++j)
                REQUIRE_FALSE(jac_equal(form, tt[i].point, tt[j].point));
        }
    }
}
