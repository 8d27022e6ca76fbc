#ifndef TROP_CHIP_HPP
#define TROP_CHIP_HPP

#include <algorithm>
#include <optional>
#include <queue>
#include <vector>

#include "trop/curve.hpp"

namespace trop {

/// Combinatorial unit-length model: every edge of the metric graph scaled by
/// the common denominator and cut into unit segments. Grid divisors on the
/// metric graph become vertex divisors here. Loops are always cut into at
/// least two segments so chip-firing never sees a self-edge.
struct UnitModel {
    Int scale;
    std::vector<std::pair<int32_t, int32_t>> segments;
    std::vector<std::vector<int32_t>> adj;  // neighbor vertices with multiplicity
    std::vector<Point> vertex_origin;       // unit vertex -> point of the metric graph

    std::size_t num_vertices() const { return vertex_origin.size(); }

    int32_t locate(const MetricGraph& g, const Point& p) const {
        if (p.at_vertex()) return p.vertex; // original vertices keep their indices
        Rat pos = p.offset * Rat(scale);
        if (pos.get_den() != 1)
            throw validation_error("point " + g.describe_point(p) + " is off the unit grid");
        // grid vertices are appended per edge in offset order
        for (int32_t v = int32_t(g.num_vertices()); v < int32_t(vertex_origin.size()); ++v)
            if (vertex_origin[std::size_t(v)] == p) return v;
        throw validation_error("point " + g.describe_point(p) + " not present in unit model");
    }
};

constexpr long long kUnitSegmentCap = 1'000'000;

/// Scale by the LCM of all length and offset denominators and subdivide into
/// unit segments; D (and the optional base point) land on vertices.
inline UnitModel to_unit_model(const MetricGraph& g, const Divisor& d,
                               std::optional<Point> base = std::nullopt) {
    Int scale(1);
    for (const auto& e : g.edges()) scale = lcm_int(scale, e.length.get_den());
    for (const auto& [p, c] : d.coefficients())
        if (!p.at_vertex()) scale = lcm_int(scale, p.offset.get_den());
    if (base && !base->at_vertex()) scale = lcm_int(scale, base->offset.get_den());
    for (const auto& e : g.edges())
        if (e.tail == e.head && Rat(scale) * e.length == 1) {
            scale *= 2;
            break;
        }

    Int total(0);
    for (const auto& e : g.edges()) {
        Rat n = Rat(scale) * e.length;
        total += n.get_num();
    }
    if (total > long(kUnitSegmentCap))
        throw resource_limit_error("unit model needs " + total.get_str() +
                                   " segments at scale " + scale.get_str() +
                                   "; cap is " + std::to_string(kUnitSegmentCap));

    UnitModel m;
    m.scale = scale;
    for (int32_t v = 0; v < int32_t(g.num_vertices()); ++v)
        m.vertex_origin.push_back(g.point_at_vertex(v));
    for (int32_t e = 0; e < int32_t(g.num_edges()); ++e) {
        const auto& ed = g.edge(e);
        Rat scaled = Rat(scale) * ed.length;
        long long n = to_ll(scaled.get_num());
        int32_t prev = ed.tail;
        for (long long k = 1; k <= n; ++k) {
            int32_t next;
            if (k == n) {
                next = ed.head;
            } else {
                next = int32_t(m.vertex_origin.size());
                m.vertex_origin.push_back(g.point_on_edge(e, to_rat(k) / Rat(scale)));
            }
            m.segments.emplace_back(prev, next);
            prev = next;
        }
    }
    m.adj.assign(m.vertex_origin.size(), {});
    for (const auto& [a, b] : m.segments) {
        m.adj[std::size_t(a)].push_back(b);
        m.adj[std::size_t(b)].push_back(a);
    }
    return m;
}

inline std::vector<long long> unit_divisor(const MetricGraph& g, const UnitModel& m,
                                           const Divisor& d) {
    std::vector<long long> chips(m.num_vertices(), 0);
    for (const auto& [p, c] : d.coefficients()) chips[std::size_t(m.locate(g, p))] += c;
    return chips;
}

/// The unique q-reduced representative of D's class: linearly equivalent,
/// nonnegative off q, and passing Dhar's burning criterion. Phase 1 makes D
/// nonnegative off q by firing balls around q along the BFS layering (each
/// far layer is fixed exactly once); phase 2 repeatedly burns from q and
/// fires the unburnt set.
inline std::vector<long long> dhar_reduce(const UnitModel& m, std::vector<long long> chips,
                                          int32_t q) {
    const std::size_t nv = m.num_vertices();
    std::vector<int> dist(nv, -1);
    std::queue<int32_t> bfs;
    dist[std::size_t(q)] = 0;
    bfs.push(q);
    int max_dist = 0;
    while (!bfs.empty()) {
        int32_t v = bfs.front();
        bfs.pop();
        for (int32_t w : m.adj[std::size_t(v)])
            if (dist[std::size_t(w)] < 0) {
                dist[std::size_t(w)] = dist[std::size_t(v)] + 1;
                max_dist = std::max(max_dist, dist[std::size_t(w)]);
                bfs.push(w);
            }
    }

    // phase 1: for layers far to near, pump chips outward across the layer
    // cut until the layer is nonnegative; only nearer layers pay
    for (int j = max_dist; j >= 1; --j) {
        long long rounds = 0;
        for (std::size_t v = 0; v < nv; ++v) {
            if (dist[v] != j || chips[v] >= 0) continue;
            long long cross = 0;
            for (int32_t w : m.adj[v])
                if (dist[std::size_t(w)] == j - 1) ++cross;
            long long need = (-chips[v] + cross - 1) / cross;
            rounds = std::max(rounds, need);
        }
        if (rounds == 0) continue;
        for (std::size_t v = 0; v < nv; ++v) {
            if (dist[v] == j) {
                long long cross = 0;
                for (int32_t w : m.adj[v])
                    if (dist[std::size_t(w)] == j - 1) ++cross;
                chips[v] += rounds * cross;
            } else if (dist[v] == j - 1) {
                long long cross = 0;
                for (int32_t w : m.adj[v])
                    if (dist[std::size_t(w)] == j) ++cross;
                chips[v] -= rounds * cross;
            }
        }
    }

    // phase 2: Dhar burning; fire the unburnt set until everything burns
    while (true) {
        std::vector<char> burnt(nv, 0);
        std::vector<long long> heat(nv, 0); // edges from v into the fire
        std::queue<int32_t> fire;
        burnt[std::size_t(q)] = 1;
        fire.push(q);
        std::size_t burnt_count = 1;
        while (!fire.empty()) {
            int32_t v = fire.front();
            fire.pop();
            for (int32_t w : m.adj[std::size_t(v)]) {
                if (burnt[std::size_t(w)]) continue;
                if (++heat[std::size_t(w)] > chips[std::size_t(w)]) {
                    burnt[std::size_t(w)] = 1;
                    ++burnt_count;
                    fire.push(w);
                }
            }
        }
        if (burnt_count == nv) break;
        for (const auto& [a, b] : m.segments) {
            const bool ba = burnt[std::size_t(a)], bb = burnt[std::size_t(b)];
            if (ba == bb) continue;
            if (ba) {
                ++chips[std::size_t(a)];
                --chips[std::size_t(b)];
            } else {
                --chips[std::size_t(a)];
                ++chips[std::size_t(b)];
            }
        }
    }
    return chips;
}

/// Effectiveness of D's class via the discrete model: reduce at q and read
/// the sign at q. Logically independent of the theta-divisor test, which is
/// exactly why the suite cross-checks the two against each other.
inline bool is_effective_oracle(const MetricGraph& g, const Divisor& d, const Point& q) {
    if (d.degree() < 0) return false;
    UnitModel m = to_unit_model(g, d, q);
    std::vector<long long> chips = unit_divisor(g, m, d);
    int32_t base = m.locate(g, q);
    std::vector<long long> reduced = dhar_reduce(m, std::move(chips), base);
    return reduced[std::size_t(base)] >= 0;
}

} // namespace trop

#endif
