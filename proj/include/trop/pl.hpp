#ifndef TROP_PL_HPP
#define TROP_PL_HPP

#include <vector>

#include "trop/curve.hpp"

namespace trop {

/// Continuous piecewise-linear function with integer slopes, stored per edge
/// as an ordered breakpoint list that always includes both endpoints.
class PLFunction {
public:
    struct Breakpoint {
        Rat offset;
        Rat value;
    };

    PLFunction(const MetricGraph& g, std::vector<std::vector<Breakpoint>> per_edge)
        : per_edge_(std::move(per_edge)) {
        validate(g);
    }

    const std::vector<Breakpoint>& edge_breakpoints(int32_t e) const {
        return per_edge_[std::size_t(e)];
    }

    Rat value_at_vertex(const MetricGraph& g, int32_t v) const {
        const auto& st = g.star(v);
        if (st.empty()) return Rat(0); // single-vertex graph: constants only
        const auto& he = st.front();
        const auto& bps = per_edge_[std::size_t(he.edge)];
        return he.at_tail ? bps.front().value : bps.back().value;
    }

    Rat value_at(const MetricGraph& g, const Point& p) const {
        if (p.at_vertex()) return value_at_vertex(g, p.vertex);
        const auto& bps = per_edge_[std::size_t(p.edge)];
        std::size_t i = 0;
        while (i + 2 < bps.size() && bps[i + 1].offset <= p.offset) ++i;
        const auto& a = bps[i];
        const auto& b = bps[i + 1];
        return a.value + (b.value - a.value) / (b.offset - a.offset) * (p.offset - a.offset);
    }

    /// Integer slope on the segment immediately after `offset` in the
    /// tail->head direction (offset must be < length).
    long long slope_after(int32_t e, const Rat& offset) const {
        const auto& bps = per_edge_[std::size_t(e)];
        std::size_t i = 0;
        while (i + 2 < bps.size() && bps[i + 1].offset <= offset) ++i;
        Rat s = (bps[i + 1].value - bps[i].value) / (bps[i + 1].offset - bps[i].offset);
        return to_ll(s.get_num());
    }

    long long slope_before(int32_t e, const Rat& offset) const {
        const auto& bps = per_edge_[std::size_t(e)];
        std::size_t i = bps.size() - 2;
        while (i > 0 && bps[i].offset >= offset) --i;
        Rat s = (bps[i + 1].value - bps[i].value) / (bps[i + 1].offset - bps[i].offset);
        return to_ll(s.get_num());
    }

    /// The corner divisor (f): at every point the sum of outgoing slopes.
    /// Supported at interior slope breaks and at vertices; degree 0.
    Divisor principal_divisor(const MetricGraph& g) const {
        Divisor d;
        for (int32_t e = 0; e < int32_t(g.num_edges()); ++e) {
            const auto& bps = per_edge_[std::size_t(e)];
            for (std::size_t i = 1; i + 1 < bps.size(); ++i) {
                long long in = slope_before(e, bps[i].offset);
                long long out = slope_after(e, bps[i].offset);
                d.add(g.point_on_edge(e, bps[i].offset), out - in);
            }
        }
        for (int32_t v = 0; v < int32_t(g.num_vertices()); ++v) {
            long long s = 0;
            for (const auto& he : g.star(v)) {
                const auto& ed = g.edge(he.edge);
                s += he.at_tail ? slope_after(he.edge, Rat(0))
                                : -slope_before(he.edge, ed.length);
            }
            d.add(g.point_at_vertex(v), s);
        }
        return d;
    }

    PLFunction& operator+=(const PLFunction& o) {
        for (std::size_t e = 0; e < per_edge_.size(); ++e) {
            auto& mine = per_edge_[e];
            const auto& theirs = o.per_edge_[e];
            std::vector<Breakpoint> merged;
            std::size_t i = 0, j = 0;
            auto value_on = [](const std::vector<Breakpoint>& bps, const Rat& t) {
                std::size_t k = 0;
                while (k + 2 < bps.size() && bps[k + 1].offset <= t) ++k;
                const auto& a = bps[k];
                const auto& b = bps[k + 1];
                if (t == a.offset) return Rat(a.value);
                return Rat(a.value + (b.value - a.value) / (b.offset - a.offset) * (t - a.offset));
            };
            while (i < mine.size() || j < theirs.size()) {
                Rat t;
                if (j == theirs.size() || (i < mine.size() && mine[i].offset <= theirs[j].offset))
                    t = mine[i].offset;
                else
                    t = theirs[j].offset;
                while (i < mine.size() && mine[i].offset == t) ++i;
                while (j < theirs.size() && theirs[j].offset == t) ++j;
                merged.push_back({t, value_on(mine, t) + value_on(theirs, t)});
            }
            mine = std::move(merged);
        }
        return *this;
    }

    friend PLFunction operator+(PLFunction a, const PLFunction& b) { return a += b; }

    PLFunction& scale(long long k) {
        for (auto& bps : per_edge_)
            for (auto& bp : bps) bp.value *= to_rat(k);
        return *this;
    }

private:
    void validate(const MetricGraph& g) const {
        if (per_edge_.size() != g.num_edges())
            throw validation_error("PL function covers wrong number of edges");
        for (int32_t e = 0; e < int32_t(g.num_edges()); ++e) {
            const auto& bps = per_edge_[std::size_t(e)];
            const auto& ed = g.edge(e);
            if (bps.size() < 2 || bps.front().offset != 0 || bps.back().offset != ed.length)
                throw validation_error("PL breakpoints must span edge " + ed.id);
            for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
                if (bps[i + 1].offset <= bps[i].offset)
                    throw validation_error("PL breakpoints not increasing on edge " + ed.id);
                Rat s = (bps[i + 1].value - bps[i].value) / (bps[i + 1].offset - bps[i].offset);
                if (s.get_den() != 1)
                    throw validation_error("non-integral slope " + rat_str(s) + " on edge " +
                                           ed.id);
            }
        }
        for (int32_t v = 0; v < int32_t(g.num_vertices()); ++v) {
            const auto& st = g.star(v);
            for (std::size_t k = 1; k < st.size(); ++k) {
                Rat a = end_value(g, st[0]);
                Rat b = end_value(g, st[k]);
                if (a != b)
                    throw validation_error("PL function discontinuous at vertex " +
                                           g.vertex(v).id);
            }
        }
    }

    Rat end_value(const MetricGraph& g, const MetricGraph::HalfEdge& he) const {
        const auto& bps = per_edge_[std::size_t(he.edge)];
        (void)g;
        return he.at_tail ? bps.front().value : bps.back().value;
    }

    std::vector<std::vector<Breakpoint>> per_edge_;
};

/// Constant function, mostly for tests and generators.
inline PLFunction constant_pl(const MetricGraph& g, const Rat& c) {
    std::vector<std::vector<PLFunction::Breakpoint>> bps(g.num_edges());
    for (int32_t e = 0; e < int32_t(g.num_edges()); ++e)
        bps[std::size_t(e)] = {{Rat(0), c}, {g.edge(e).length, c}};
    return PLFunction(g, std::move(bps));
}

} // namespace trop

#endif
