#include <catch2/catch_amalgamated.hpp>

#include "trop/chars.hpp"
#include "trop/io.hpp"
#include "trop/sampling.hpp"

using namespace trop;

namespace {
MetricGraph load(const std::string& name) {
    return load_curve_file(std::string(TROP_TEST_DATA_DIR) + "/" + name);
}
} // namespace

TEST_CASE("flow: distance functions") {
    SECTION("circle: tent with peak 1 at the antipode") {
        MetricGraph g = load("circle2.json");
        PLFunction d = distance_function(g, {g.basepoint()});
        REQUIRE(d.value_at(g, g.basepoint()) == 0);
        REQUIRE(d.value_at(g, g.point_on_edge(0, Rat(1))) == 1);
        REQUIRE(d.value_at(g, g.point_on_edge(0, Rat(1, 2))) == Rat(1, 2));
        REQUIRE(d.value_at(g, g.point_on_edge(0, Rat(3, 2))) == Rat(1, 2));
    }
    SECTION("theta graph from u: ascends every edge") {
        MetricGraph g = load("theta.json");
        PLFunction d = distance_function(g, {g.point_at_vertex(g.vertex_index("u"))});
        REQUIRE(d.value_at_vertex(g, g.vertex_index("v")) == 1);
        for (int32_t e = 0; e < 3; ++e) {
            REQUIRE(d.slope_after(e, Rat(0)) == 1);
            REQUIRE(d.value_at(g, g.point_on_edge(e, Rat(1, 3))) == Rat(1, 3));
        }
    }
    SECTION("edge-set source: identically zero on the source") {
        MetricGraph g = load("circle2.json");
        DistanceSource src;
        src.edges = {0};
        PLFunction d = distance_function(g, src);
        REQUIRE(d.value_at(g, g.point_on_edge(0, Rat(1, 3))) == 0);
        REQUIRE(d.value_at(g, g.basepoint()) == 0);
    }
    SECTION("interior sources become breakpoints on their edge") {
        MetricGraph g = load("path.json");
        Point mid = g.point_on_edge(g.edge_index("qr"), Rat(3, 4));
        PLFunction d = distance_function(g, {mid});
        REQUIRE(d.value_at(g, mid) == 0);
        REQUIRE(d.value_at_vertex(g, g.vertex_index("q")) == Rat(3, 4));
        REQUIRE(d.value_at_vertex(g, g.vertex_index("r")) == Rat(3, 4));
        REQUIRE(d.value_at_vertex(g, g.vertex_index("p")) == Rat(7, 4));
    }
    SECTION("ridge offsets obey the collision formula") {
        Sampler rng(67);
        for (int i = 0; i < 10; ++i) {
            MetricGraph g = rng.random_graph();
            std::vector<Point> s = rng.point_set(g, 2);
            PLFunction d = distance_function(g, s);
            for (int32_t e = 0; e < int32_t(g.num_edges()); ++e) {
                const auto& bps = d.edge_breakpoints(e);
                for (std::size_t k = 1; k + 1 < bps.size(); ++k) {
                    if (d.slope_before(e, bps[k].offset) == 1 &&
                        d.slope_after(e, bps[k].offset) == -1) {
                        Rat du = bps.front().value, dv = bps.back().value;
                        Rat len = g.edge(e).length;
                        // only the pure tent has a single interior ridge
                        if (bps.size() == 3)
                            REQUIRE(bps[k].offset == (len + dv - du) / 2);
                    }
                }
            }
        }
    }
    SECTION("empty source is an error") {
        MetricGraph g = load("circle2.json");
        REQUIRE_THROWS_AS(distance_function(g, std::vector<Point>{}), validation_error);
    }
}

TEST_CASE("flow: moderators") {
    SECTION("circle: K^-_q = m - q and K^+_q = q - m") {
        MetricGraph g = load("circle2.json");
        Point m = g.point_on_edge(0, Rat(1));
        Divisor km = moderator(g, {g.basepoint()}, FlowSign::minus);
        REQUIRE(km.coeff(m) == 1);
        REQUIRE(km.coeff(g.basepoint()) == -1);
        REQUIRE(km.degree() == 0);
        Divisor kp = moderator(g, {g.basepoint()}, FlowSign::plus);
        REQUIRE(kp.coeff(m) == -1);
        REQUIRE(kp.coeff(g.basepoint()) == 1);
    }
    SECTION("theta graph: K^-_u = 2v - u") {
        MetricGraph g = load("theta.json");
        Divisor km = moderator(g, {g.point_at_vertex(g.vertex_index("u"))}, FlowSign::minus);
        REQUIRE(km.coeff(g.point_at_vertex(g.vertex_index("v"))) == 2);
        REQUIRE(km.coeff(g.point_at_vertex(g.vertex_index("u"))) == -1);
        REQUIRE(km.degree() == 1);
    }
    SECTION("degree g-1, acyclic flow, lemma identities, class constancy") {
        Sampler rng(71);
        for (const char* name : {"theta_frac.json", "dumbbell.json", "k4.json", "path.json"}) {
            MetricGraph g = load(name);
            GramForm form = gram_matrix(g);
            Divisor big_k = g.canonical_divisor();
            KappaClass kap = compute_kappa(g, form);
            for (int i = 0; i < 6; ++i) {
                std::vector<Point> s = rng.point_set(g, 3);
                FlowOrientation fo = orient_distance_flow(g, s);
                REQUIRE(fo.acyclic());
                Divisor km = fo.char_divisor(FlowSign::minus);
                Divisor kp = fo.char_divisor(FlowSign::plus);
                REQUIRE(km.degree() == g.genus() - 1);
                REQUIRE(kp + km == big_k);
                REQUIRE(kp - km == distance_function(g, s).principal_divisor(g));
                REQUIRE(jac_equal(form, abel_jacobi(g, form, km), kap.k0));
            }
        }
    }
}

TEST_CASE("flow: gamma classes") {
    MetricGraph g = load("theta.json");
    GramForm form = gram_matrix(g);
    SECTION("trivial bits: empty support") {
        GammaClass gc = gamma_support(g, form.basis, {0, 0});
        REQUIRE(gc.trivial());
        REQUIRE_THROWS_AS(char_divisor(g, gc, FlowSign::minus), validation_error);
    }
    SECTION("supports by parity count") {
        // basis: e2 - e1 and e3 - e1
        GammaClass g10 = gamma_support(g, form.basis, {1, 0});
        REQUIRE(g10.support == std::vector<int32_t>{0, 1});
        GammaClass g01 = gamma_support(g, form.basis, {0, 1});
        REQUIRE(g01.support == std::vector<int32_t>{0, 2});
        GammaClass g11 = gamma_support(g, form.basis, {1, 1});
        REQUIRE(g11.support == std::vector<int32_t>{1, 2}); // e1 cancels mod 2
        REQUIRE(g10.circuits.size() == 1);
        REQUIRE(g10.circuits[0].size() == 2);
    }
    SECTION("circle, gamma = loop: flow-through everywhere, empty K^-") {
        MetricGraph c = load("circle2.json");
        GramForm fc = gram_matrix(c);
        GammaClass gc = gamma_support(c, fc.basis, {1});
        REQUIRE(gc.support == std::vector<int32_t>{0});
        Divisor km = char_divisor(c, gc, FlowSign::minus);
        REQUIRE(km.empty());
        REQUIRE(km.degree() == c.genus() - 1);
    }
    SECTION("theta graph, support {e1,e2}: ridge at the midpoint of e3") {
        GammaClass gc = gamma_support(g, form.basis, {1, 0});
        Divisor km = char_divisor(g, gc, FlowSign::minus);
        Divisor expected;
        expected.add(g.point_on_edge(g.edge_index("e3"), Rat(1, 2)), 1);
        REQUIRE(km == expected);
    }
    SECTION("gamma flow: cyclic only along the support") {
        GammaClass gc = gamma_support(g, form.basis, {1, 1});
        FlowOrientation fo = orient_gamma_flow(g, gc);
        REQUIRE_FALSE(fo.acyclic());
        REQUIRE(fo.acyclic(true));
    }
    SECTION("lemma identities and lift independence for every gamma") {
        Sampler rng(73);
        for (const char* name : {"theta.json", "dumbbell.json", "k4.json"}) {
            MetricGraph cg = load(name);
            GramForm cf = gram_matrix(cg);
            Divisor big_k = cg.canonical_divisor();
            for (std::size_t mask = 1; mask < (std::size_t(1) << cf.rank()); ++mask) {
                std::vector<uint8_t> bits(cf.rank());
                for (std::size_t i = 0; i < cf.rank(); ++i)
                    bits[i] = uint8_t((mask >> i) & 1);
                GammaClass gc = gamma_support(cg, cf.basis, bits);
                Divisor km = char_divisor(cg, gc, FlowSign::minus);
                Divisor kp = char_divisor(cg, gc, FlowSign::plus);
                REQUIRE(km.is_effective());
                REQUIRE(km.degree() == cg.genus() - 1);
                REQUIRE(kp + km == big_k);
                DistanceSource src;
                src.edges = gc.support;
                REQUIRE(kp - km ==
                        distance_function(cg, src).principal_divisor(cg));
                // reversing any one circuit is a different lift of gamma
                for (std::size_t k = 0; k < gc.circuits.size(); ++k) {
                    GammaClass alt = gc;
                    std::reverse(alt.circuits[k].begin(), alt.circuits[k].end());
                    for (auto& [e, dir] : alt.circuits[k]) dir = -dir;
                    REQUIRE(char_divisor(cg, alt, FlowSign::minus) == km);
                }
            }
        }
        (void)rng;
    }
}

TEST_CASE("flow: theta characteristics table") {
    SECTION("circle: two rows") {
        MetricGraph g = load("circle2.json");
        GramForm form = gram_matrix(g);
        auto chars = theta_characteristics(g, form);
        REQUIRE(chars.size() == 2);
        REQUIRE(jac_canonical(form, chars[0].cls) == JacPoint{Rat(1)});
        REQUIRE_FALSE(chars[0].effective);
        REQUIRE(jac_canonical(form, chars[1].cls) == JacPoint{Rat(0)});
        REQUIRE(chars[1].effective);
    }
    SECTION("tree: one row of degree -1") {
        MetricGraph g = load("path.json");
        GramForm form = gram_matrix(g);
        auto chars = theta_characteristics(g, form);
        REQUIRE(chars.size() == 1);
        REQUIRE(chars[0].k_minus.degree() == -1);
        REQUIRE_FALSE(chars[0].effective);
    }
    SECTION("theta graph: four rows, one non-effective, distinct classes") {
        MetricGraph g = load("theta.json");
        GramForm form = gram_matrix(g);
        auto chars = theta_characteristics(g, form);
        REQUIRE(chars.size() == 4);
        int neff = 0;
        for (const auto& tc : chars) neff += tc.effective ? 0 : 1;
        REQUIRE(neff == 1);
        REQUIRE_FALSE(chars[0].effective);
        for (std::size_t i = 0; i < chars.size(); ++i)
            for (std::size_t j = i + 1; j < chars.size(); ++j)
                REQUIRE_FALSE(jac_equal(form, chars[i].cls, chars[j].cls));
    }
}
