#ifndef TROP_VERIFY_HPP
#define TROP_VERIFY_HPP

#include <functional>
#include <string>
#include <vector>

#include "trop/chars.hpp"
#include "trop/chip.hpp"
#include "trop/sampling.hpp"

namespace trop {

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

struct VerifyReport {
    std::string curve;
    uint64_t seed = 0;
    int genus = 0;
    std::size_t characteristics = 0;
    std::size_t non_effective = 0;
    bool oracle_checked = true;
    std::vector<CheckResult> checks;
    bool all_pass = true;
};

namespace detail {

/// All simple cycles by exhaustive edge-subset search (graphs are desk
/// scale); a subset qualifies iff every touched vertex has degree exactly 2
/// and the subset is connected.
inline std::vector<Cycle> enumerate_simple_cycles(const MetricGraph& g) {
    std::vector<Cycle> cycles;
    const std::size_t ne = g.num_edges();
    if (ne == 0 || ne > 16) return cycles;
    for (std::size_t mask = 1; mask < (std::size_t(1) << ne); ++mask) {
        std::vector<int> deg(g.num_vertices(), 0);
        for (std::size_t e = 0; e < ne; ++e)
            if (mask & (std::size_t(1) << e)) {
                ++deg[std::size_t(g.edge(int32_t(e)).tail)];
                ++deg[std::size_t(g.edge(int32_t(e)).head)];
            }
        bool ok = true;
        for (int d : deg) ok = ok && (d == 0 || d == 2);
        if (!ok) continue;

        // walk the subset; it is a single simple cycle iff the walk uses
        // every subset edge
        int32_t start_edge = -1;
        for (std::size_t e = 0; e < ne && start_edge < 0; ++e)
            if (mask & (std::size_t(1) << e)) start_edge = int32_t(e);
        Cycle c(ne, 0);
        std::vector<char> used(ne, 0);
        c[std::size_t(start_edge)] = 1;
        used[std::size_t(start_edge)] = 1;
        int32_t start = g.edge(start_edge).tail;
        int32_t cur = g.edge(start_edge).head;
        std::size_t steps = 1;
        while (cur != start) {
            int32_t next = -1;
            bool forward = true;
            for (const auto& he : g.star(cur)) {
                if (!(mask & (std::size_t(1) << he.edge)) || used[std::size_t(he.edge)])
                    continue;
                next = he.edge;
                forward = he.at_tail;
                break;
            }
            if (next < 0) break;
            used[std::size_t(next)] = 1;
            c[std::size_t(next)] = forward ? 1 : -1;
            cur = forward ? g.edge(next).head : g.edge(next).tail;
            ++steps;
        }
        std::size_t popcount = 0;
        for (std::size_t e = 0; e < ne; ++e)
            if (mask & (std::size_t(1) << e)) ++popcount;
        if (cur == start && steps == popcount) cycles.push_back(std::move(c));
    }
    return cycles;
}

inline GammaClass reverse_circuits(GammaClass gamma, const std::vector<int>& which) {
    for (int k : which) {
        auto& c = gamma.circuits[std::size_t(k)];
        std::reverse(c.begin(), c.end());
        for (auto& [e, d] : c) d = -d;
    }
    return gamma;
}

} // namespace detail

/// The full invariant suite on one curve with a fixed seed; every check is
/// exact. Used by the `verify` command and reused by the acceptance tests.
inline VerifyReport run_verify(const MetricGraph& g, uint64_t seed) {
    VerifyReport rep;
    rep.curve = g.name();
    rep.seed = seed;
    rep.genus = g.genus();
    Sampler rng(seed);

    auto check = [&](const std::string& name, const std::function<std::string()>& body) {
        CheckResult r{name, true, ""};
        try {
            r.detail = body();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = e.what();
        }
        rep.all_pass = rep.all_pass && r.pass;
        rep.checks.push_back(std::move(r));
    };
    auto expect = [](bool ok, const std::string& msg) {
        if (!ok) throw std::logic_error(msg);
    };

    GramForm form = gram_matrix(g);
    const Divisor big_k = g.canonical_divisor();
    const std::size_t rank = form.rank();

    check("canonical-degree", [&] {
        expect(big_k.degree() == 2 * g.genus() - 2, "deg K != 2g-2");
        return "deg K = " + std::to_string(big_k.degree());
    });

    check("gram-form", [&] {
        expect(int(rank) == g.genus(), "basis size != genus");
        for (std::size_t i = 0; i < rank; ++i) {
            Rat total = 0;
            for (std::size_t e = 0; e < g.num_edges(); ++e)
                if (form.basis[i][e] != 0) total += g.edge(int32_t(e)).length;
            expect(form.gram(i, i) == total, "diagonal != cycle length");
            for (std::size_t j = 0; j < rank; ++j)
                expect(form.gram(i, j) == form.gram(j, i), "gram not symmetric");
            for (std::size_t e = 0; e < g.num_edges(); ++e)
                expect(form.basis[i][e] >= -1 && form.basis[i][e] <= 1,
                       "basis cycle not simple");
        }
        for (const Rat& d : form.ldl.d) expect(d > 0, "LDL pivot not positive");
        return "positive definite, rank " + std::to_string(rank);
    });

    check("simple-cycle-lengths", [&] {
        auto cycles = detail::enumerate_simple_cycles(g);
        for (const Cycle& c : cycles) {
            Rat len = 0;
            for (std::size_t e = 0; e < g.num_edges(); ++e)
                if (c[e] != 0) len += g.edge(int32_t(e)).length;
            expect(q_pair(g, c, c) == len, "Q(c,c) != length(c)");
            // boundary zero at every vertex
            for (int32_t v = 0; v < int32_t(g.num_vertices()); ++v) {
                long long flow = 0;
                for (const auto& he : g.star(v))
                    flow += he.at_tail ? -c[std::size_t(he.edge)] : c[std::size_t(he.edge)];
                expect(flow == 0, "cycle has nonzero boundary");
            }
        }
        return std::to_string(cycles.size()) + " simple cycles checked";
    });

    check("basis-covariance", [&] {
        for (int trial = 0; trial < 3 && rank > 0; ++trial) {
            RatMat m = rng.unimodular(rank);
            std::vector<Cycle> transformed(rank, Cycle(g.num_edges(), 0));
            for (std::size_t i = 0; i < rank; ++i)
                for (std::size_t j = 0; j < rank; ++j) {
                    long long mc = to_ll(m(j, i).get_num());
                    if (m(j, i).get_den() != 1) throw std::logic_error("non-integer shear");
                    for (std::size_t e = 0; e < g.num_edges(); ++e)
                        transformed[i][e] += mc * form.basis[j][e];
                }
            RatMat lhs(rank, rank);
            for (std::size_t i = 0; i < rank; ++i)
                for (std::size_t j = 0; j < rank; ++j)
                    lhs(i, j) = q_pair(g, transformed[i], transformed[j]);
            RatMat rhs = m.transposed() * form.gram * m;
            expect(lhs == rhs, "gram does not transform as M^T G M");
        }
        return "3 unimodular trials";
    });

    check("subdivision-invariance", [&] {
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<Point> pts = rng.point_set(g, 3);
            Refinement ref = subdivide_at(g, pts);
            const MetricGraph& rg = ref.model();
            expect(rg.genus() == g.genus(), "genus changed");
            expect(ref.map_divisor(big_k) == rg.canonical_divisor(), "K changed");
            std::vector<Cycle> mapped;
            for (const Cycle& c : form.basis) mapped.push_back(ref.map_edge_vector(c));
            GramForm rform = gram_matrix(rg, mapped);
            expect(rform.gram == form.gram, "gram changed");
        }
        return "3 refinements";
    });

    check("principal-divisors", [&] {
        for (int trial = 0; trial < 5; ++trial) {
            PLFunction f = rng.pl_function(g);
            Divisor d = f.principal_divisor(g);
            expect(d.degree() == 0, "principal divisor has nonzero degree");
            JacPoint img = abel_jacobi(g, form, d);
            expect(jac_equal(form, img, jac_zero(form)),
                   "abel_jacobi of a principal divisor is nonzero");
            Divisor base = rng.divisor(g, 3, 2);
            expect(lin_equiv(g, form, base, base + d), "D !~ D + (f)");
        }
        return "5 random PL functions";
    });

    check("abel-jacobi-wellformed", [&] {
        for (int trial = 0; trial < 5; ++trial) {
            Divisor d1 = rng.divisor(g, 3, 2);
            Divisor d2 = rng.divisor(g, 3, 2);
            JacPoint sum = abel_jacobi(g, form, d1 + d2);
            JacPoint parts = abel_jacobi(g, form, d1) + abel_jacobi(g, form, d2);
            expect(jac_equal(form, sum, parts), "additivity failed");
        }
        Point p = rng.point(g), q = rng.point(g);
        Divisor pq;
        pq.add(p, 1);
        pq.add(q, -1);
        JacPoint base_img = abel_jacobi(g, form, pq);
        for (int32_t v = 0; v < int32_t(g.num_vertices()); ++v) {
            JacPoint other = abel_jacobi(g, form, pq, g.point_at_vertex(v));
            expect(jac_equal(form, base_img, other), "degree-0 image moved with basepoint");
            JacPoint treed = abel_jacobi(g, form, pq, std::nullopt, v);
            expect(jac_equal(form, base_img, treed), "image moved with the spanning tree");
        }
        return "additivity, basepoint and tree independence";
    });

    check("jac-canonical-form", [&] {
        for (int trial = 0; trial < 10 && rank > 0; ++trial) {
            JacPoint x = rng.jac_point(form);
            JacPoint cx = jac_canonical(form, x);
            expect(jac_equal(form, x, cx), "canonical form left the class");
            JacPoint shifted = x + form.lattice_coords(rng.lattice_vector(form));
            expect(jac_canonical(form, shifted) == cx, "canonical form not unique");
            expect(jac_equal(form, x, shifted), "lattice shift left the class");
        }
        return "10 canonical-form trials";
    });

    check("two-torsion", [&] {
        auto tt = two_torsion(form);
        expect(tt.size() == (std::size_t(1) << rank), "wrong count");
        for (std::size_t i = 0; i < tt.size(); ++i) {
            expect(jac_equal(form, tt[i].point + tt[i].point, jac_zero(form)),
                   "doubling is nonzero");
            for (std::size_t j = i + 1; j < tt.size(); ++j)
                expect(!jac_equal(form, tt[i].point, tt[j].point), "two torsion collision");
        }
        return std::to_string(tt.size()) + " points";
    });

    check("theta-evenness", [&] {
        for (int trial = 0; trial < 200 && rank > 0; ++trial) {
            JacPoint x = rng.jac_point(form);
            RatVec neg(rank);
            for (std::size_t i = 0; i < rank; ++i) neg[i] = -x[i];
            expect(theta_eval(form, x).value == theta_eval(form, neg).value,
                   "theta not even");
        }
        return "200 points";
    });

    check("theta-quasi-periodicity", [&] {
        for (int trial = 0; trial < 200 && rank > 0; ++trial) {
            JacPoint x = rng.jac_point(form);
            std::vector<long long> n = rng.lattice_vector(form);
            RatVec gn = form.lattice_coords(n);
            Rat lhs = theta_eval(form, x + gn).value;
            Rat nx = 0;
            for (std::size_t i = 0; i < rank; ++i) nx += to_rat(n[i]) * x[i];
            Rat rhs = theta_eval(form, x).value + nx + quad_form(form, n) / 2;
            expect(lhs == rhs, "quasi-periodicity violated");
        }
        return "200 points";
    });

    check("theta-convexity", [&] {
        for (int trial = 0; trial < 50 && rank > 0; ++trial) {
            JacPoint x = rng.jac_point(form);
            JacPoint y = rng.jac_point(form);
            RatVec mid(rank);
            for (std::size_t i = 0; i < rank; ++i) mid[i] = (x[i] + y[i]) / 2;
            Rat lhs = theta_eval(form, mid).value;
            Rat rhs = (theta_eval(form, x).value + theta_eval(form, y).value) / 2;
            expect(lhs <= rhs, "midpoint convexity violated");
        }
        return "50 midpoints";
    });

    check("theta-two-torsion-locus", [&] {
        expect(!on_theta_divisor(form, jac_zero(form)), "0 lies on the theta divisor");
        for (const auto& tt : two_torsion(form)) {
            bool zero = true;
            for (uint8_t b : tt.bits) zero = zero && b == 0;
            if (!zero)
                expect(on_theta_divisor(form, tt.point),
                       "nonzero two-torsion point off the theta divisor");
        }
        return "0 off, nonzero half-periods on";
    });

    KappaClass kap = compute_kappa(g, form);

    check("kappa-consistency", [&] {
        JacPoint muk = abel_jacobi(g, form, big_k);
        expect(jac_equal(form, kap.k0 + kap.k0, muk), "2(-kappa) != mu(K)");
        RatVec neg(rank);
        for (std::size_t i = 0; i < rank; ++i) neg[i] = -kap.kappa[i];
        expect(jac_equal(form, kap.k0, neg), "k0 != -kappa");
        return "2(-kappa) = mu(K)";
    });

    check("pullback-divisors", [&] {
        for (int trial = 0; trial < 20 && rank > 0; ++trial) {
            JacPoint shift = rng.jac_point(form);
            Divisor d = pullback_divisor(g, form, shift);
            expect(d.degree() == g.genus(), "deg D_lambda != g");
            expect(d.is_effective(), "D_lambda not effective");
            JacPoint shifted = shift + form.lattice_coords(rng.lattice_vector(form));
            expect(pullback_divisor(g, form, shifted) == d,
                   "D_lambda moved under a lattice shift");
        }
        return "20 shifts, degree g, effective, Lambda-invariant";
    });

    check("jacobi-inversion", [&] {
        expect(jacobi_inversion_check(g, form, kap, jac_zero(form)), "failed at 0");
        expect(jacobi_inversion_check(g, form, kap, kap.kappa), "failed at kappa");
        for (int trial = 0; trial < 10 && rank > 0; ++trial) {
            JacPoint lambda = rng.jac_point(form);
            expect(jacobi_inversion_check(g, form, kap, lambda), "failed at a random point");
        }
        return "0, kappa, 10 random points";
    });

    check("moderators", [&] {
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<Point> s = rng.point_set(g, 3);
            FlowOrientation fo = orient_distance_flow(g, s);
            expect(fo.acyclic(), "gradient orientation has a directed cycle");
            Divisor km = fo.char_divisor(FlowSign::minus);
            Divisor kp = fo.char_divisor(FlowSign::plus);
            expect(km.degree() == g.genus() - 1, "deg K^- != g-1");
            expect(kp.degree() == g.genus() - 1, "deg K^+ != g-1");
            expect(kp + km == big_k, "K^+ + K^- != K");
            PLFunction ds = distance_function(g, s);
            expect(kp - km == ds.principal_divisor(g), "K^+ - K^- != (d_S)");
            expect(jac_equal(form, abel_jacobi(g, form, km), kap.k0),
                   "moderator class is not K_0");
        }
        return "10 source sets";
    });

    check("gamma-characteristics", [&] {
        for (std::size_t mask = 1; mask < (std::size_t(1) << rank); ++mask) {
            std::vector<uint8_t> bits(rank);
            for (std::size_t i = 0; i < rank; ++i) bits[i] = uint8_t((mask >> i) & 1);
            GammaClass gamma = gamma_support(g, form.basis, bits);
            Divisor km = char_divisor(g, gamma, FlowSign::minus);
            Divisor kp = char_divisor(g, gamma, FlowSign::plus);
            expect(km.degree() == g.genus() - 1, "deg K^-_gamma != g-1");
            expect(km.is_effective(), "K^-_gamma not effective");
            expect(kp + km == big_k, "K^+_gamma + K^-_gamma != K");
            DistanceSource src;
            src.edges = gamma.support;
            PLFunction dg = distance_function(g, src);
            expect(kp - km == dg.principal_divisor(g), "K^+_gamma - K^-_gamma != (d_gamma)");
            // lift independence: reverse every subset of circuits in turn
            for (std::size_t k = 0; k < gamma.circuits.size(); ++k) {
                GammaClass alt = detail::reverse_circuits(gamma, {int(k)});
                expect(char_divisor(g, alt, FlowSign::minus) == km,
                       "K^-_gamma depends on the lift");
            }
            FlowOrientation fo = orient_gamma_flow(g, gamma);
            expect(fo.acyclic(true), "gamma flow cyclic off the support");
        }
        return std::to_string((std::size_t(1) << rank) - 1) + " nontrivial classes";
    });

    std::vector<ThetaCharacteristic> chars;
    check("theta-characteristics", [&] {
        chars = theta_characteristics(g, form); // postconditions assert inside
        rep.characteristics = chars.size();
        for (const auto& tc : chars)
            if (!tc.effective) ++rep.non_effective;
        expect(rep.non_effective == 1, "expected exactly one non-effective");
        expect(jac_equal(form, chars.front().cls, kap.k0), "K_0 class is not -kappa");
        for (std::size_t i = 0; i < chars.size(); ++i)
            for (std::size_t j = i + 1; j < chars.size(); ++j)
                expect(!jac_equal(form, chars[i].cls, chars[j].cls),
                       "characteristic classes collide");
        return std::to_string(chars.size()) + " characteristics, 1 non-effective";
    });

    check("oracle-agreement", [&] {
        if (chars.empty()) throw std::logic_error("characteristic table unavailable");
        try {
            for (const auto& tc : chars) {
                bool disc = is_effective_oracle(g, tc.k_minus, g.basepoint());
                expect(disc == tc.effective, "theta and Dhar effectiveness disagree");
            }
        } catch (const resource_limit_error& e) {
            rep.oracle_checked = false;
            return std::string("skipped: ") + e.what();
        }
        return std::string("all characteristics cross-checked");
    });

    check("dhar-reduction", [&] {
        Point q = g.basepoint();
        Divisor km = moderator(g, {q}, FlowSign::minus);
        UnitModel m = to_unit_model(g, km, q);
        std::vector<long long> chips = unit_divisor(g, m, km);
        int32_t base = m.locate(g, q);
        std::vector<long long> reduced = dhar_reduce(m, chips, base);
        expect(reduced == chips, "K^-_q is not its own q-reduced form");
        expect(dhar_reduce(m, reduced, base) == reduced, "reduction not idempotent");
        // class invariance: fire a few vertices and reduce again
        std::vector<long long> moved = chips;
        for (std::size_t v = 0; v < m.num_vertices(); ++v) {
            if (v % 2 == 0) continue;
            moved[v] -= (long long)m.adj[v].size();
            for (int32_t w : m.adj[v]) ++moved[std::size_t(w)];
        }
        expect(dhar_reduce(m, moved, base) == reduced, "reduction not class-invariant");
        return "fixed point, idempotent, class-invariant";
    });

    check("refinement-invariance", [&] {
        std::vector<Point> pts = rng.point_set(g, 2);
        Refinement ref = subdivide_at(g, pts);
        const MetricGraph& rg = ref.model();
        std::vector<Cycle> mapped;
        for (const Cycle& c : form.basis) mapped.push_back(ref.map_edge_vector(c));
        GramForm rform = gram_matrix(rg, mapped);
        KappaClass rkap = compute_kappa(rg, rform);
        expect(jac_equal(form, kap.kappa, rkap.kappa), "kappa changed under refinement");
        auto rchars = theta_characteristics(rg, rform);
        expect(rchars.size() == chars.size(), "characteristic count changed");
        for (std::size_t i = 0; i < chars.size(); ++i) {
            expect(ref.map_divisor_back(rchars[i].k_minus) == chars[i].k_minus,
                   "K^- divisor changed under refinement");
            expect(rchars[i].effective == chars[i].effective,
                   "effectiveness changed under refinement");
            expect(jac_equal(form, rchars[i].cls, chars[i].cls),
                   "class changed under refinement");
        }
        return "full table stable under refinement";
    });

    return rep;
}

} // namespace trop

#endif
