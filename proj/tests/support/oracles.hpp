// Independent oracles for the test suite. Everything here recomputes results
// by brute force (box enumeration, pairwise crossings, exhaustive subsets)
// and must stay free of the library's CVP / incremental-envelope code paths.
#ifndef TROP_TEST_ORACLES_HPP
#define TROP_TEST_ORACLES_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "trop/chip.hpp"
#include "trop/jacobian.hpp"
#include "trop/theta.hpp"

namespace oracles {

using namespace trop;

/// Max of n.x - q(n)/2 over the integer box [-bound, bound]^g with the full
/// argmax set. Throws if a maximizer touches the box boundary (box too small
/// to certify the global max).
inline ThetaValue brute_theta(const GramForm& form, const RatVec& x, long long bound = 6) {
    const std::size_t g = form.rank();
    ThetaValue tv;
    if (g == 0) {
        tv.value = 0;
        tv.argmax = {{}};
        return tv;
    }
    std::vector<long long> n(g, -bound);
    bool first = true;
    while (true) {
        Rat v = theta_term(form, n, x);
        if (first || v > tv.value) {
            tv.value = v;
            tv.argmax.clear();
            first = false;
        }
        if (v == tv.value) tv.argmax.push_back(n);
        std::size_t i = 0;
        while (i < g && n[i] == bound) {
            n[i] = -bound;
            ++i;
        }
        if (i == g) break;
        ++n[i];
    }
    for (const auto& m : tv.argmax)
        for (long long c : m)
            if (c == bound || c == -bound)
                throw std::runtime_error("brute_theta: box too small");
    std::sort(tv.argmax.begin(), tv.argmax.end());
    return tv;
}

inline long long dot(const std::vector<long long>& a, const std::vector<long long>& b) {
    long long s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Pullback divisor reconstructed independently: box candidates, pairwise
/// exact crossings, argmax slope spans at every crossing, and one-sided
/// slope sums at the vertices. Only valid while the box certifiably covers
/// every argmax met along the way (brute_theta throws otherwise).
inline Divisor brute_pullback(const MetricGraph& g, const GramForm& form, const JacPoint& shift,
                              long long bound = 6) {
    Divisor out;
    if (form.rank() == 0) return out;
    AbelJacobi aj(g, form);

    for (int32_t v = 0; v < int32_t(g.num_vertices()); ++v) {
        RatVec y = aj.point_coords(g.point_at_vertex(v)) - shift;
        ThetaValue tv = brute_theta(form, y, bound);
        long long coeff = 0;
        for (const auto& he : g.star(v)) {
            std::vector<long long> s = edge_direction(form, he.edge);
            if (!he.at_tail)
                for (auto& si : s) si = -si;
            long long best = dot(tv.argmax.front(), s);
            for (const auto& n : tv.argmax) best = std::max(best, dot(n, s));
            coeff += best;
        }
        out.add(g.point_at_vertex(v), coeff);
    }

    for (int32_t e = 0; e < int32_t(g.num_edges()); ++e) {
        const auto& ed = g.edge(e);
        std::vector<long long> s = edge_direction(form, e);
        bool moving = false;
        for (long long si : s) moving = moving || si != 0;
        if (!moving) continue;
        RatVec y0 = aj.point_coords(g.point_at_vertex(ed.tail)) - shift;

        // all box lines over the edge; crossings of distinct-slope pairs
        std::vector<std::pair<Rat, long long>> lines; // (intercept, slope)
        {
            std::vector<long long> n(form.rank(), -bound);
            while (true) {
                lines.emplace_back(theta_term(form, n, y0), dot(n, s));
                std::size_t i = 0;
                while (i < form.rank() && n[i] == bound) {
                    n[i] = -bound;
                    ++i;
                }
                if (i == form.rank()) break;
                ++n[i];
            }
        }
        std::vector<Rat> times;
        for (std::size_t a = 0; a < lines.size(); ++a)
            for (std::size_t b = a + 1; b < lines.size(); ++b) {
                if (lines[a].second == lines[b].second) continue;
                Rat t = (lines[a].first - lines[b].first) /
                        to_rat(lines[b].second - lines[a].second);
                if (t > 0 && t < ed.length) times.push_back(t);
            }
        std::sort(times.begin(), times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());
        for (const Rat& t : times) {
            RatVec x = y0;
            for (std::size_t i = 0; i < x.size(); ++i) x[i] += t * to_rat(s[i]);
            ThetaValue tv = brute_theta(form, x, bound);
            long long smax = dot(tv.argmax.front(), s), smin = smax;
            for (const auto& n : tv.argmax) {
                smax = std::max(smax, dot(n, s));
                smin = std::min(smin, dot(n, s));
            }
            if (smax > smin) out.add(g.point_on_edge(e, t), smax - smin);
        }
    }
    return out;
}

/// Dhar's criterion checked exhaustively: chips >= 0 off q and every
/// nonempty vertex subset avoiding q has a vertex with fewer chips than
/// edges leaving the subset. Graphs must be small (<= ~16 vertices).
inline bool dhar_criterion(const UnitModel& m, const std::vector<long long>& chips, int32_t q) {
    const std::size_t nv = m.num_vertices();
    if (nv > 16) throw std::runtime_error("dhar_criterion: graph too large for subsets");
    for (std::size_t v = 0; v < nv; ++v)
        if (int32_t(v) != q && chips[v] < 0) return false;
    for (std::size_t mask = 1; mask < (std::size_t(1) << nv); ++mask) {
        if (mask & (std::size_t(1) << q)) continue;
        bool has_fireable_defect = false;
        for (std::size_t v = 0; v < nv && !has_fireable_defect; ++v) {
            if (!(mask & (std::size_t(1) << v))) continue;
            long long outdeg = 0;
            for (int32_t w : m.adj[v])
                if (!(mask & (std::size_t(1) << std::size_t(w)))) ++outdeg;
            if (chips[v] < outdeg) has_fireable_defect = true;
        }
        if (!has_fireable_defect) return false;
    }
    return true;
}

/// All chip configurations reachable from `chips` by firing single vertices
/// up to the given depth (brute-force linear-equivalence variants).
inline std::vector<std::vector<long long>> firing_variants(const UnitModel& m,
                                                           const std::vector<long long>& chips,
                                                           int depth) {
    std::vector<std::vector<long long>> out{chips};
    std::vector<std::vector<long long>> frontier{chips};
    for (int d = 0; d < depth; ++d) {
        std::vector<std::vector<long long>> next;
        for (const auto& cfg : frontier) {
            for (std::size_t v = 0; v < m.num_vertices(); ++v) {
                std::vector<long long> fired = cfg;
                fired[v] -= (long long)m.adj[v].size();
                for (int32_t w : m.adj[v]) ++fired[std::size_t(w)];
                next.push_back(fired);
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
        if (out.size() > 4000) break; // plenty of variants for the check
    }
    return out;
}

} // namespace oracles

#endif
