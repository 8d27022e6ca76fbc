#ifndef TROP_THETA_HPP
#define TROP_THETA_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "trop/flow.hpp"
#include "trop/jacobian.hpp"

namespace trop {

/// Theta(x) = max over lattice vectors n of (n.x - (1/2) n^T G n), together
/// with the full set of maximizers. The corner locus (|argmax| >= 2) is the
/// theta divisor.
struct ThetaValue {
    Rat value;
    std::vector<std::vector<long long>> argmax; // sorted lexicographically

    bool on_divisor() const { return argmax.size() >= 2; }
};

inline Rat quad_form(const GramForm& form, const std::vector<long long>& n) {
    Rat q = 0;
    for (std::size_t i = 0; i < form.rank(); ++i) {
        if (n[i] == 0) continue;
        for (std::size_t j = 0; j < form.rank(); ++j)
            if (n[j] != 0) q += to_rat(n[i]) * to_rat(n[j]) * form.gram(i, j);
    }
    return q;
}

inline Rat theta_term(const GramForm& form, const std::vector<long long>& n, const RatVec& x) {
    Rat v = 0;
    for (std::size_t i = 0; i < form.rank(); ++i)
        if (n[i] != 0) v += to_rat(n[i]) * x[i];
    return v - quad_form(form, n) / 2;
}

namespace detail {

/// Exact closest-vector enumeration: all integer n minimizing
/// (n - c)^T G (n - c), by Fincke-Pohst / Schnorr-Euchner zigzag over the
/// LDL^T factorization, every comparison in exact rationals. The node budget
/// guards against adversarial inputs.
class CvpEnumerator {
public:
    CvpEnumerator(const GramForm& form, RatVec c, long long node_cap)
        : form_(form), c_(std::move(c)), cap_(node_cap) {}

    void run() {
        const std::size_t g = form_.rank();
        n_.assign(g, 0);
        diff_.assign(g, Rat(0));
        // seed radius from the rounded center
        std::vector<long long> seed(g);
        for (std::size_t i = 0; i < g; ++i) seed[i] = to_ll(round_half_down(c_[i]));
        best_ = 0;
        {
            RatVec v(g);
            for (std::size_t i = 0; i < g; ++i) v[i] = to_rat(seed[i]) - c_[i];
            for (std::size_t i = 0; i < g; ++i)
                for (std::size_t j = 0; j < g; ++j)
                    if (v[i] != 0 && v[j] != 0) best_ += v[i] * v[j] * form_.gram(i, j);
        }
        descend(int(g) - 1, Rat(0));
    }

    const Rat& min_value() const { return best_; }
    std::vector<std::vector<long long>> take_minimizers() {
        std::sort(minimizers_.begin(), minimizers_.end());
        return std::move(minimizers_);
    }

private:
    void descend(int level, const Rat& partial) {
        if (level < 0) {
            if (partial < best_) {
                best_ = partial;
                minimizers_.clear();
            }
            if (partial == best_) minimizers_.push_back(n_);
            return;
        }
        const std::size_t i = std::size_t(level);
        Rat center = c_[i];
        for (std::size_t j = i + 1; j < form_.rank(); ++j)
            if (form_.ldl.l(j, i) != 0) center -= form_.ldl.l(j, i) * diff_[j];
        const long long mid = to_ll(round_half_down(center));
        bool up_alive = true, down_alive = true;
        for (long long step = 0; up_alive || down_alive; ++step) {
            for (int dirn : {+1, -1}) {
                if (step == 0 && dirn < 0) continue; // visit the center once
                bool& alive = dirn > 0 ? up_alive : down_alive;
                if (!alive) continue;
                if (++nodes_ > cap_)
                    throw resource_limit_error(
                        "lattice enumeration exceeded the node budget");
                const long long cand = mid + dirn * step;
                Rat w = to_rat(cand) - center;
                Rat cost = partial + form_.ldl.d[i] * w * w;
                if (cost > best_) {
                    // quadratic in |cand - center|: dead in this direction,
                    // and at step 0 dead both ways
                    if (step == 0) { up_alive = down_alive = false; }
                    alive = false;
                    continue;
                }
                n_[i] = cand;
                diff_[i] = to_rat(cand) - c_[i];
                descend(level - 1, cost);
            }
        }
    }

    const GramForm& form_;
    RatVec c_;
    long long cap_;
    long long nodes_ = 0;
    Rat best_;
    std::vector<long long> n_;
    RatVec diff_;
    std::vector<std::vector<long long>> minimizers_;
};

} // namespace detail

constexpr long long kThetaNodeCap = 10'000'000;

/// Exact global evaluation of the theta function with the full argmax set.
/// Uses max_n (n.x - q(n)/2) = x^T G^{-1} x / 2 - min_n (n-c)^T G (n-c) / 2
/// with c = G^{-1} x, so the maximizers are the lattice points closest to c.
inline ThetaValue theta_eval(const GramForm& form, const RatVec& x) {
    if (x.size() != form.rank())
        throw validation_error("theta argument has wrong dimension");
    if (form.rank() == 0) return ThetaValue{Rat(0), {{}}};
    detail::CvpEnumerator cvp(form, form.gram_inv * x, kThetaNodeCap);
    cvp.run();
    ThetaValue tv;
    tv.argmax = cvp.take_minimizers();
    tv.value = theta_term(form, tv.argmax.front(), x);
    return tv;
}

inline bool on_theta_divisor(const GramForm& form, const RatVec& x) {
    return theta_eval(form, x).on_divisor();
}

/// Integer direction vector of an edge in basis coordinates:
/// s_e[i] = basis_i(e), the speed of the curve's map into J along e.
inline std::vector<long long> edge_direction(const GramForm& form, int32_t e) {
    std::vector<long long> s(form.rank());
    for (std::size_t i = 0; i < form.rank(); ++i) s[i] = form.basis[i][std::size_t(e)];
    return s;
}

namespace detail {

inline long long dot_ll(const std::vector<long long>& a, const std::vector<long long>& b) {
    long long s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

struct EnvLine {
    Rat intercept;
    long long slope;
};

/// Upper envelope of affine lines over [0, len]: returns the interior
/// breakpoints, exactly. Classic convex-hull-of-lines with rational
/// crossings; the first hull line reigns from -infinity, so only start[k]
/// for k >= 1 are real breakpoints.
inline std::vector<Rat> envelope_breakpoints(std::vector<EnvLine> lines, const Rat& len) {
    std::sort(lines.begin(), lines.end(), [](const EnvLine& a, const EnvLine& b) {
        return a.slope < b.slope || (a.slope == b.slope && a.intercept < b.intercept);
    });
    std::vector<EnvLine> distinct; // per slope keep only the highest intercept
    for (const auto& l : lines) {
        if (!distinct.empty() && distinct.back().slope == l.slope)
            distinct.back() = l;
        else
            distinct.push_back(l);
    }
    std::vector<EnvLine> hull;
    std::vector<Rat> start; // start[0] unused (reigns from -infinity)
    for (const auto& l : distinct) {
        Rat from;
        while (!hull.empty()) {
            const auto& top = hull.back();
            // l has the larger slope, so it overtakes top at t0
            Rat t0 = (top.intercept - l.intercept) / to_rat(l.slope - top.slope);
            if (hull.size() >= 2 && t0 <= start.back()) {
                hull.pop_back();
                start.pop_back();
                continue;
            }
            from = t0;
            break;
        }
        hull.push_back(l);
        start.push_back(from); // meaningless for the very first line
    }
    std::vector<Rat> interior;
    for (std::size_t k = 1; k < start.size(); ++k)
        if (start[k] > 0 && start[k] < len) interior.push_back(start[k]);
    return interior;
}

} // namespace detail

/// Pullback divisor D_shift: the corner divisor of p -> Theta(mu(p) - shift).
///
/// Along each edge the composition is an upper envelope of lines with integer
/// slopes; the envelope is built from the endpoint argmax sets and certified
/// by fresh exact theta evaluations at every breakpoint, adding maximizers
/// and rebuilding until nothing new appears (convexity then forces equality
/// on the whole edge). Interior breakpoints contribute (max - min) argmax
/// slope. Each vertex contributes the sum of one-sided envelope slopes over
/// its star, all read in that vertex's own path chart: charts across a
/// non-tree edge differ by quasi-periodicity, which shifts slopes, so mixing
/// charts at a vertex would miscount exactly when mu(p) lands on a corner of
/// the theta divisor. The result is effective of degree g for every shift,
/// degenerate positions included.
inline Divisor pullback_divisor(const MetricGraph& g, const GramForm& form,
                                const JacPoint& shift) {
    if (shift.size() != form.rank())
        throw validation_error("shift has wrong dimension");
    Divisor out;
    if (form.rank() == 0) return out;

    AbelJacobi aj(g, form);
    std::vector<RatVec> chart(g.num_vertices());
    std::vector<ThetaValue> vertex_theta(g.num_vertices());
    for (int32_t v = 0; v < int32_t(g.num_vertices()); ++v) {
        chart[std::size_t(v)] = aj.point_coords(g.point_at_vertex(v)) - shift;
        vertex_theta[std::size_t(v)] = theta_eval(form, chart[std::size_t(v)]);
    }

    // vertex coefficients: sum over the star of max_{n in argmax} <n, s_dir>
    for (int32_t v = 0; v < int32_t(g.num_vertices()); ++v) {
        const auto& A = vertex_theta[std::size_t(v)].argmax;
        long long coeff = 0;
        for (const auto& he : g.star(v)) {
            std::vector<long long> s = edge_direction(form, he.edge);
            if (!he.at_tail)
                for (auto& si : s) si = -si;
            long long best = detail::dot_ll(A.front(), s);
            for (std::size_t k = 1; k < A.size(); ++k)
                best = std::max(best, detail::dot_ll(A[k], s));
            coeff += best;
        }
        out.add(g.point_at_vertex(v), coeff);
    }

    // interior corners per edge, in the tail's chart
    for (int32_t e = 0; e < int32_t(g.num_edges()); ++e) {
        const auto& ed = g.edge(e);
        const std::vector<long long> s = edge_direction(form, e);
        bool moving = false;
        for (long long si : s) moving = moving || si != 0;
        if (!moving) continue; // bridge: the map is constant along e

        const RatVec& y0 = chart[std::size_t(ed.tail)];
        auto x_at = [&](const Rat& t) {
            RatVec x = y0;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (s[i] != 0) x[i] += t * to_rat(s[i]);
            return x;
        };

        std::map<std::vector<long long>, bool> candidates;
        auto add_candidates = [&](const ThetaValue& tv) {
            bool fresh = false;
            for (const auto& n : tv.argmax)
                if (candidates.emplace(n, true).second) fresh = true;
            return fresh;
        };
        add_candidates(theta_eval(form, x_at(Rat(0))));
        add_candidates(theta_eval(form, x_at(ed.length)));

        std::map<Rat, ThetaValue> corner_cache;
        for (int round = 0;; ++round) {
            if (round > 4096)
                throw resource_limit_error("envelope certification failed to converge");
            std::vector<detail::EnvLine> lines;
            lines.reserve(candidates.size());
            for (const auto& [n, unused] : candidates) {
                (void)unused;
                lines.push_back({theta_term(form, n, y0), detail::dot_ll(n, s)});
            }
            std::vector<Rat> bps = detail::envelope_breakpoints(lines, ed.length);
            bool changed = false;
            corner_cache.clear();
            for (const Rat& t : bps) {
                ThetaValue tv = theta_eval(form, x_at(t));
                Rat env = lines.front().intercept + to_rat(lines.front().slope) * t;
                for (const auto& l : lines) {
                    Rat lv = l.intercept + to_rat(l.slope) * t;
                    if (lv > env) env = lv;
                }
                if (tv.value > env) {
                    if (add_candidates(tv)) changed = true;
                }
                corner_cache.emplace(t, std::move(tv));
            }
            if (!changed) break;
        }

        for (const auto& [t, tv] : corner_cache) {
            long long smax = detail::dot_ll(tv.argmax.front(), s);
            long long smin = smax;
            for (std::size_t k = 1; k < tv.argmax.size(); ++k) {
                long long sk = detail::dot_ll(tv.argmax[k], s);
                smax = std::max(smax, sk);
                smin = std::min(smin, sk);
            }
            if (smax > smin) out.add(g.point_on_edge(e, t), smax - smin);
        }
    }
    return out;
}

/// The Riemann constant and its negative. k0 is the class of every moderator
/// K^-_S; kappa = -k0 is the shift that makes Jacobi inversion exact
/// (mu(D_lambda) + kappa = lambda) and Riemann's theorem usable as the
/// effectiveness test (W_{g-1} + kappa = [Theta]).
struct KappaClass {
    JacPoint kappa;
    JacPoint k0;
};

inline KappaClass compute_kappa(const MetricGraph& g, const GramForm& form) {
    Divisor kminus = moderator(g, {g.basepoint()}, FlowSign::minus);
    JacPoint k0 = jac_canonical(form, abel_jacobi(g, form, kminus));
    RatVec neg(k0.size());
    for (std::size_t i = 0; i < k0.size(); ++i) neg[i] = -k0[i];
    return KappaClass{jac_canonical(form, neg), k0};
}

/// Theorem check mu^g(D_lambda) + kappa = lambda; exposed so the CLI can
/// sample many lambda. A false return is a library defect.
inline bool jacobi_inversion_check(const MetricGraph& g, const GramForm& form,
                                   const KappaClass& kap, const JacPoint& lambda) {
    Divisor d = pullback_divisor(g, form, lambda);
    if (d.degree() != g.genus() || !d.is_effective()) return false;
    JacPoint img = abel_jacobi(g, form, d);
    return jac_equal(form, img + kap.kappa, lambda);
}

/// A degree-(g-1) class c is effective iff c + kappa lies on the theta
/// divisor (degree is tracked by the caller, not inside the coordinates).
inline bool effective_class_test(const GramForm& form, const KappaClass& kap,
                                 const JacPoint& c) {
    return on_theta_divisor(form, c + kap.kappa);
}

} // namespace trop

#endif
