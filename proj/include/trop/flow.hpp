#ifndef TROP_FLOW_HPP
#define TROP_FLOW_HPP

#include <cassert>
#include <memory>
#include <queue>
#include <vector>

#include "trop/curve.hpp"
#include "trop/homology.hpp"
#include "trop/pl.hpp"

namespace trop {

enum class FlowSign { plus, minus };

/// Source set for a distance function: finite points, plus (for the gamma
/// variant) whole closed edges on which the distance vanishes identically.
struct DistanceSource {
    std::vector<Point> points;
    std::vector<int32_t> edges;

    bool empty() const { return points.empty() && edges.empty(); }
};

namespace detail {

/// Multi-source Dijkstra over vertices, exact rational lengths, deterministic
/// tie-breaking by (distance, vertex index).
inline std::vector<Rat> dijkstra(const MetricGraph& g, const std::vector<int32_t>& sources) {
    std::vector<Rat> dist(g.num_vertices(), Rat(-1));
    using Item = std::pair<Rat, int32_t>;
    auto cmp = [](const Item& a, const Item& b) {
        return a.first > b.first || (a.first == b.first && a.second > b.second);
    };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
    for (int32_t s : sources) {
        if (dist[std::size_t(s)] == 0) continue;
        dist[std::size_t(s)] = 0;
        pq.push({Rat(0), s});
    }
    std::vector<char> done(g.num_vertices(), 0);
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (done[std::size_t(v)]) continue;
        done[std::size_t(v)] = 1;
        for (const auto& he : g.star(v)) {
            const auto& ed = g.edge(he.edge);
            int32_t w = he.at_tail ? ed.head : ed.tail;
            Rat nd = d + ed.length;
            if (dist[std::size_t(w)] < 0 || nd < dist[std::size_t(w)]) {
                dist[std::size_t(w)] = nd;
                pq.push({nd, w});
            }
        }
    }
    return dist;
}

} // namespace detail

/// Exact multi-source distance function d_S (or d_gamma when edge sources are
/// given). Piecewise linear with slopes +-1 off the sources, 0 on source
/// edges; local maxima are the ridge points where flows collide.
inline PLFunction distance_function(const MetricGraph& g, const DistanceSource& src) {
    if (src.empty()) throw validation_error("distance function needs a nonempty source");

    // make interior source points vertices, then work on the refined model
    Refinement ref = subdivide_at(g, src.points);
    const MetricGraph& rg = ref.model();

    std::vector<char> edge_is_source(rg.num_edges(), 0);
    std::vector<int32_t> seeds;
    for (const Point& p : src.points) {
        Point q = ref.map_point(p);
        assert(q.at_vertex());
        seeds.push_back(q.vertex);
    }
    if (!src.edges.empty()) {
        std::vector<long long> marker(g.num_edges(), 0);
        for (int32_t e : src.edges) marker[std::size_t(e)] = 1;
        std::vector<long long> rmarker = ref.map_edge_vector(marker);
        for (std::size_t e = 0; e < rg.num_edges(); ++e) {
            if (!rmarker[e]) continue;
            edge_is_source[e] = 1;
            seeds.push_back(rg.edge(int32_t(e)).tail);
            seeds.push_back(rg.edge(int32_t(e)).head);
        }
    }

    std::vector<Rat> dist = detail::dijkstra(rg, seeds);

    // PL data per refined edge, then stitched back onto the original edges
    std::vector<std::vector<PLFunction::Breakpoint>> refined(rg.num_edges());
    for (int32_t e = 0; e < int32_t(rg.num_edges()); ++e) {
        const auto& ed = rg.edge(e);
        const Rat& du = dist[std::size_t(ed.tail)];
        const Rat& dv = dist[std::size_t(ed.head)];
        auto& bps = refined[std::size_t(e)];
        if (edge_is_source[std::size_t(e)]) {
            bps = {{Rat(0), Rat(0)}, {ed.length, Rat(0)}};
            continue;
        }
        Rat gap = du - dv;
        if (gap < 0) gap = -gap;
        assert(gap <= ed.length);
        if (gap == ed.length) {
            bps = {{Rat(0), du}, {ed.length, dv}};
        } else {
            Rat ridge = (ed.length + dv - du) / 2;
            Rat peak = (ed.length + du + dv) / 2;
            bps = {{Rat(0), du}, {ridge, peak}, {ed.length, dv}};
        }
    }

    // stitch refined segments back onto the original edges; segment order
    // follows refined edge order, which subdivide_at emits tail-to-head
    std::vector<std::vector<PLFunction::Breakpoint>> per_edge(g.num_edges());
    for (int32_t e = 0; e < int32_t(g.num_edges()); ++e) {
        std::vector<long long> probe(g.num_edges(), 0);
        probe[std::size_t(e)] = 1;
        std::vector<long long> rprobe = ref.map_edge_vector(probe);
        auto& out = per_edge[std::size_t(e)];
        Rat walked = 0;
        for (std::size_t re = 0; re < rg.num_edges(); ++re) {
            if (!rprobe[re]) continue;
            for (const auto& bp : refined[re]) {
                Rat off = walked + bp.offset;
                if (!out.empty() && out.back().offset == off) continue;
                out.push_back({off, bp.value});
            }
            walked += rg.edge(int32_t(re)).length;
        }
    }
    return PLFunction(g, std::move(per_edge));
}

inline PLFunction distance_function(const MetricGraph& g, const std::vector<Point>& sources) {
    return distance_function(g, DistanceSource{sources, {}});
}

/// An orientation of a refined model: every refined edge carries exactly one
/// direction. Gradient orientations of d_S are acyclic; gamma orientations
/// are acyclic away from the support circuits.
struct FlowOrientation {
    std::shared_ptr<const MetricGraph> model;
    std::vector<int8_t> dir;          // +1: tail->head, -1: head->tail
    std::vector<Point> vertex_origin; // refined vertex -> point of the original graph
    std::vector<char> is_ridge;       // refined vertex is a collision point
    std::vector<char> on_support;     // refined edge lies on |gamma| (empty for d_S flows)

    int val_in(int32_t v) const { return valence(v, -1); }
    int val_out(int32_t v) const { return valence(v, +1); }

    /// Moderator-style divisor sum((val_[sign] - 1) p) over the refined model,
    /// expressed in points of the original graph.
    Divisor char_divisor(FlowSign sign) const {
        Divisor d;
        for (int32_t v = 0; v < int32_t(model->num_vertices()); ++v) {
            int val = sign == FlowSign::minus ? val_in(v) : val_out(v);
            d.add(vertex_origin[std::size_t(v)], val - 1);
        }
        return d;
    }

    /// True iff the directed refined model is acyclic; support edges may be
    /// excluded to test gamma flows.
    bool acyclic(bool skip_support = false) const {
        std::vector<int> indeg(model->num_vertices(), 0);
        for (std::size_t e = 0; e < model->num_edges(); ++e) {
            if (skip_support && !on_support.empty() && on_support[e]) continue;
            const auto& ed = model->edge(int32_t(e));
            ++indeg[std::size_t(dir[e] > 0 ? ed.head : ed.tail)];
        }
        std::queue<int32_t> q;
        for (int32_t v = 0; v < int32_t(model->num_vertices()); ++v)
            if (indeg[std::size_t(v)] == 0) q.push(v);
        std::size_t removed = 0;
        while (!q.empty()) {
            int32_t v = q.front();
            q.pop();
            ++removed;
            for (const auto& he : model->star(v)) {
                if (skip_support && !on_support.empty() && on_support[std::size_t(he.edge)])
                    continue;
                const auto& ed = model->edge(he.edge);
                bool leaves_v = (dir[std::size_t(he.edge)] > 0) == he.at_tail;
                if (!leaves_v) continue;
                int32_t w = he.at_tail ? ed.head : ed.tail;
                if (--indeg[std::size_t(w)] == 0) q.push(w);
            }
        }
        return removed == model->num_vertices();
    }

private:
    int valence(int32_t v, int sign) const {
        int n = 0;
        for (const auto& he : model->star(v)) {
            bool leaves_v = (dir[std::size_t(he.edge)] > 0) == he.at_tail;
            if ((sign > 0) == leaves_v) ++n;
        }
        return n;
    }
};

namespace detail {

/// Ridge points of a distance function: interior collision points, one per
/// edge where |d(head) - d(tail)| < length (source edges excluded).
inline std::vector<Point> ridge_points(const MetricGraph& g, const std::vector<Rat>& dist,
                                       const std::vector<char>& edge_is_source) {
    std::vector<Point> ridges;
    for (int32_t e = 0; e < int32_t(g.num_edges()); ++e) {
        if (!edge_is_source.empty() && edge_is_source[std::size_t(e)]) continue;
        const auto& ed = g.edge(e);
        const Rat& du = dist[std::size_t(ed.tail)];
        const Rat& dv = dist[std::size_t(ed.head)];
        Rat gap = du - dv;
        if (gap < 0) gap = -gap;
        if (gap == ed.length) continue;
        ridges.push_back(g.point_on_edge(e, (ed.length + dv - du) / 2));
        assert(!ridges.back().at_vertex());
    }
    return ridges;
}

} // namespace detail

/// Gradient-flow orientation of d_S: refine at interior sources and ridge
/// points, then direct every refined edge by increasing distance.
inline FlowOrientation orient_distance_flow(const MetricGraph& g, const std::vector<Point>& s) {
    if (s.empty()) throw validation_error("moderator needs a nonempty source set");
    Refinement r1 = subdivide_at(g, s);
    std::vector<int32_t> seeds;
    for (const Point& p : s) seeds.push_back(r1.map_point(p).vertex);
    std::vector<Rat> d1 = detail::dijkstra(r1.model(), seeds);

    std::vector<Point> ridges = detail::ridge_points(r1.model(), d1, {});
    Refinement r2 = subdivide_at(r1.model(), ridges);
    std::vector<int32_t> seeds2;
    for (int32_t v : seeds) seeds2.push_back(r2.map_point(r1.model().point_at_vertex(v)).vertex);
    std::vector<Rat> d2 = detail::dijkstra(r2.model(), seeds2);

    FlowOrientation fo;
    fo.model = std::make_shared<MetricGraph>(r2.model());
    fo.dir.resize(fo.model->num_edges());
    for (int32_t e = 0; e < int32_t(fo.model->num_edges()); ++e) {
        const auto& ed = fo.model->edge(e);
        const Rat& du = d2[std::size_t(ed.tail)];
        const Rat& dv = d2[std::size_t(ed.head)];
        assert(du != dv);
        fo.dir[std::size_t(e)] = du < dv ? int8_t(1) : int8_t(-1);
    }
    fo.vertex_origin.resize(fo.model->num_vertices());
    fo.is_ridge.assign(fo.model->num_vertices(), 0);
    for (int32_t v = 0; v < int32_t(fo.model->num_vertices()); ++v)
        fo.vertex_origin[std::size_t(v)] =
            r1.map_back(r2.map_back(fo.model->point_at_vertex(v)));
    for (const Point& rp : ridges) {
        Point rv = r2.map_point(rp);
        assert(rv.at_vertex());
        fo.is_ridge[std::size_t(rv.vertex)] = 1;
    }
    return fo;
}

/// K+-_S of the acyclic gradient orientation of d_S; degree g-1 either way.
inline Divisor moderator(const MetricGraph& g, const std::vector<Point>& s, FlowSign sign) {
    return orient_distance_flow(g, s).char_divisor(sign);
}

/// A class in H_1(C, Z/2Z): bit vector over the basis cycles, the supporting
/// edge set |gamma|, and a deterministic decomposition of the support into
/// edge-disjoint oriented circuits.
struct GammaClass {
    std::vector<uint8_t> bits;
    std::vector<int32_t> support;
    std::vector<std::vector<std::pair<int32_t, int>>> circuits; // (edge, +-1 traversal)

    bool trivial() const { return support.empty(); }
};

inline GammaClass gamma_support(const MetricGraph& g, const std::vector<Cycle>& basis,
                                const std::vector<uint8_t>& bits) {
    if (bits.size() != basis.size())
        throw validation_error("gamma bit vector length must equal the genus");
    GammaClass gc;
    gc.bits = bits;
    std::vector<long long> parity(g.num_edges(), 0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (!bits[i]) continue;
        for (std::size_t e = 0; e < g.num_edges(); ++e) parity[e] += basis[i][e];
    }
    for (std::size_t e = 0; e < g.num_edges(); ++e)
        if (parity[e] % 2 != 0) gc.support.push_back(int32_t(e));

    // even valence inside the support is cycle-space algebra; assert it
    std::vector<int> deg(g.num_vertices(), 0);
    for (int32_t e : gc.support) {
        ++deg[std::size_t(g.edge(e).tail)];
        ++deg[std::size_t(g.edge(e).head)];
    }
    for (int v = 0; v < int(g.num_vertices()); ++v) assert(deg[std::size_t(v)] % 2 == 0);

    // greedy closed walks: always leave by the lowest-index unused support edge
    std::vector<char> used(g.num_edges(), 0);
    std::vector<char> in_support(g.num_edges(), 0);
    for (int32_t e : gc.support) in_support[std::size_t(e)] = 1;
    for (int32_t e0 : gc.support) {
        if (used[std::size_t(e0)]) continue;
        std::vector<std::pair<int32_t, int>> circuit;
        int32_t start = g.edge(e0).tail;
        used[std::size_t(e0)] = 1;
        circuit.emplace_back(e0, +1);
        int32_t cur = g.edge(e0).head;
        while (cur != start) {
            int32_t next = -1;
            int dir = 0;
            for (const auto& he : g.star(cur)) {
                if (!in_support[std::size_t(he.edge)] || used[std::size_t(he.edge)]) continue;
                if (next == -1 || he.edge < next) {
                    next = he.edge;
                    dir = he.at_tail ? +1 : -1;
                }
            }
            assert(next >= 0 && "even valence guarantees the walk closes");
            used[std::size_t(next)] = 1;
            circuit.emplace_back(next, dir);
            cur = dir > 0 ? g.edge(next).head : g.edge(next).tail;
        }
        gc.circuits.push_back(std::move(circuit));
    }
    return gc;
}

/// Orientation for a nontrivial gamma: circuit directions on |gamma|, the
/// gradient flow of d_gamma elsewhere, ridges refined into vertices.
inline FlowOrientation orient_gamma_flow(const MetricGraph& g, const GammaClass& gamma) {
    if (gamma.trivial()) throw validation_error("gamma flow needs a nontrivial class");

    std::vector<char> edge_is_source(g.num_edges(), 0);
    std::vector<int32_t> seeds;
    for (int32_t e : gamma.support) {
        edge_is_source[std::size_t(e)] = 1;
        seeds.push_back(g.edge(e).tail);
        seeds.push_back(g.edge(e).head);
    }
    std::vector<Rat> d = detail::dijkstra(g, seeds);
    std::vector<Point> ridges = detail::ridge_points(g, d, edge_is_source);
    Refinement r = subdivide_at(g, ridges);
    std::vector<int32_t> seeds2;
    for (int32_t v : seeds) seeds2.push_back(r.map_point(g.point_at_vertex(v)).vertex);
    std::vector<Rat> d2 = detail::dijkstra(r.model(), seeds2);

    // circuit direction per original support edge
    std::vector<int> support_dir(g.num_edges(), 0);
    for (const auto& circuit : gamma.circuits)
        for (const auto& [e, dir] : circuit) support_dir[std::size_t(e)] = dir;

    std::vector<long long> marker(g.num_edges(), 0);
    for (int32_t e : gamma.support) marker[std::size_t(e)] = 1;
    std::vector<long long> rsupport = r.map_edge_vector(marker);
    std::vector<long long> rdir =
        r.map_edge_vector(std::vector<long long>(support_dir.begin(), support_dir.end()));

    FlowOrientation fo;
    fo.model = std::make_shared<MetricGraph>(r.model());
    fo.dir.resize(fo.model->num_edges());
    fo.on_support.resize(fo.model->num_edges());
    for (int32_t e = 0; e < int32_t(fo.model->num_edges()); ++e) {
        fo.on_support[std::size_t(e)] = rsupport[std::size_t(e)] != 0;
        if (fo.on_support[std::size_t(e)]) {
            fo.dir[std::size_t(e)] = int8_t(rdir[std::size_t(e)]);
        } else {
            const auto& ed = fo.model->edge(e);
            const Rat& du = d2[std::size_t(ed.tail)];
            const Rat& dv = d2[std::size_t(ed.head)];
            assert(du != dv);
            fo.dir[std::size_t(e)] = du < dv ? int8_t(1) : int8_t(-1);
        }
    }
    fo.vertex_origin.resize(fo.model->num_vertices());
    fo.is_ridge.assign(fo.model->num_vertices(), 0);
    for (int32_t v = 0; v < int32_t(fo.model->num_vertices()); ++v)
        fo.vertex_origin[std::size_t(v)] = r.map_back(fo.model->point_at_vertex(v));
    for (const Point& rp : ridges) {
        Point rv = r.map_point(rp);
        fo.is_ridge[std::size_t(rv.vertex)] = 1;
    }
    return fo;
}

/// K+-_gamma; K-_gamma is effective because the gamma flow has no source point.
inline Divisor char_divisor(const MetricGraph& g, const GammaClass& gamma, FlowSign sign) {
    return orient_gamma_flow(g, gamma).char_divisor(sign);
}

} // namespace trop

#endif
