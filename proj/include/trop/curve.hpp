#ifndef TROP_CURVE_HPP
#define TROP_CURVE_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "trop/errors.hpp"
#include "trop/rational.hpp"

namespace trop {

class MetricGraph;

/// A point of the curve in canonical form: either a vertex, or an interior
/// point of an edge with 0 < offset < length (offsets 0 and length normalize
/// to the corresponding vertex). Points are only meaningful relative to the
/// graph that produced them.
struct Point {
    int32_t vertex = -1; // >= 0 iff vertex point
    int32_t edge = -1;   // >= 0 iff edge-interior point
    Rat offset;          // from the tail, only for edge-interior points

    bool at_vertex() const { return vertex >= 0; }

    friend bool operator==(const Point& a, const Point& b) {
        if (a.vertex >= 0 || b.vertex >= 0) return a.vertex == b.vertex;
        return a.edge == b.edge && a.offset == b.offset;
    }
    friend bool operator<(const Point& a, const Point& b) {
        const bool av = a.vertex >= 0, bv = b.vertex >= 0;
        if (av != bv) return av; // vertex points first
        if (av) return a.vertex < b.vertex;
        if (a.edge != b.edge) return a.edge < b.edge;
        return a.offset < b.offset;
    }
};

/// Finite formal sum of points with integer coefficients. Zero coefficients
/// are dropped eagerly, so equality of maps is equality of divisors.
class Divisor {
public:
    using Map = std::map<Point, long long>;

    Divisor() = default;

    void add(const Point& p, long long c) {
        if (c == 0) return;
        auto it = coeffs_.find(p);
        if (it == coeffs_.end()) {
            coeffs_.emplace(p, c);
        } else {
            it->second += c;
            if (it->second == 0) coeffs_.erase(it);
        }
    }

    long long coeff(const Point& p) const {
        auto it = coeffs_.find(p);
        return it == coeffs_.end() ? 0 : it->second;
    }

    long long degree() const {
        long long d = 0;
        for (const auto& [p, c] : coeffs_) d += c;
        return d;
    }

    bool is_effective() const {
        for (const auto& [p, c] : coeffs_)
            if (c < 0) return false;
        return true;
    }

    bool empty() const { return coeffs_.empty(); }
    std::size_t support_size() const { return coeffs_.size(); }
    const Map& coefficients() const { return coeffs_; }

    Divisor& operator+=(const Divisor& o) {
        for (const auto& [p, c] : o.coeffs_) add(p, c);
        return *this;
    }
    Divisor& operator-=(const Divisor& o) {
        for (const auto& [p, c] : o.coeffs_) add(p, -c);
        return *this;
    }
    friend Divisor operator+(Divisor a, const Divisor& b) { return a += b; }
    friend Divisor operator-(Divisor a, const Divisor& b) { return a -= b; }
    friend Divisor operator*(long long k, const Divisor& d) {
        Divisor r;
        if (k != 0)
            for (const auto& [p, c] : d.coeffs_) r.add(p, k * c);
        return r;
    }
    friend bool operator==(const Divisor& a, const Divisor& b) { return a.coeffs_ == b.coeffs_; }

private:
    Map coeffs_;
};

/// One fixed model of a tropical curve: vertices, oriented edges with
/// positive rational lengths, and a basepoint. The tail->head orientation is
/// a coordinate convention only; loops and parallel edges are allowed.
/// Immutable after construction; file order fixes all iteration orders.
class MetricGraph {
public:
    struct Vertex {
        std::string id;
    };
    struct Edge {
        std::string id;
        int32_t tail;
        int32_t head;
        Rat length;
    };
    struct HalfEdge {
        int32_t edge;
        bool at_tail; // true: this end is the tail end
    };

    MetricGraph(std::string name, std::vector<Vertex> vertices, std::vector<Edge> edges)
        : name_(std::move(name)), vertices_(std::move(vertices)), edges_(std::move(edges)) {
        validate();
        build_index();
        basepoint_ = Point{0, -1, Rat()};
    }

    const std::string& name() const { return name_; }
    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    const Vertex& vertex(int32_t i) const { return vertices_[std::size_t(i)]; }
    const Edge& edge(int32_t i) const { return edges_[std::size_t(i)]; }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Point& basepoint() const { return basepoint_; }

    void set_basepoint(const Point& p) { basepoint_ = p; }

    int32_t vertex_index(const std::string& id) const {
        auto it = vertex_index_.find(id);
        if (it == vertex_index_.end()) throw validation_error("unknown vertex id: " + id);
        return it->second;
    }
    int32_t edge_index(const std::string& id) const {
        auto it = edge_index_.find(id);
        if (it == edge_index_.end()) throw validation_error("unknown edge id: " + id);
        return it->second;
    }
    bool has_vertex_id(const std::string& id) const { return vertex_index_.count(id) > 0; }
    bool has_edge_id(const std::string& id) const { return edge_index_.count(id) > 0; }

    /// Incident half-edges in file order (a loop contributes both ends).
    const std::vector<HalfEdge>& star(int32_t v) const { return stars_[std::size_t(v)]; }

    int valence(int32_t v) const { return int(stars_[std::size_t(v)].size()); }

    /// Canonical point on an edge; offsets 0 and length normalize to vertices.
    Point point_on_edge(int32_t e, Rat offset) const {
        offset.canonicalize(); // raw p/q input may arrive non-canonical
        const Edge& ed = edges_[std::size_t(e)];
        if (offset < 0 || offset > ed.length)
            throw validation_error("offset " + rat_str(offset) + " outside edge " + ed.id);
        if (offset == 0) return Point{ed.tail, -1, Rat()};
        if (offset == ed.length) return Point{ed.head, -1, Rat()};
        return Point{-1, e, offset};
    }

    Point point_at_vertex(int32_t v) const { return Point{v, -1, Rat()}; }

    /// First Betti number |E| - |V| + 1; the graph is connected by invariant.
    int genus() const { return int(edges_.size()) - int(vertices_.size()) + 1; }

    /// K = sum over vertices of (val - 2) * v; degree 2g-2, supported away
    /// from 2-valent vertices, so it is stable under subdivision.
    Divisor canonical_divisor() const {
        Divisor k;
        for (int32_t v = 0; v < int32_t(vertices_.size()); ++v)
            k.add(point_at_vertex(v), valence(v) - 2);
        return k;
    }

    std::string describe_point(const Point& p) const {
        if (p.at_vertex()) return vertices_[std::size_t(p.vertex)].id;
        return edges_[std::size_t(p.edge)].id + "@" + rat_str(p.offset);
    }

private:
    void validate() {
        if (vertices_.empty()) throw validation_error("graph has no vertices");
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            if (vertices_[i].id.empty()) throw validation_error("empty vertex id");
            if (!vertex_index_.emplace(vertices_[i].id, int32_t(i)).second)
                throw validation_error("duplicate vertex id: " + vertices_[i].id);
        }
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            Edge& e = edges_[i];
            e.length.canonicalize();
            if (e.id.empty()) throw validation_error("empty edge id");
            if (!edge_index_.emplace(e.id, int32_t(i)).second)
                throw validation_error("duplicate edge id: " + e.id);
            if (e.tail < 0 || e.tail >= int32_t(vertices_.size()) || e.head < 0 ||
                e.head >= int32_t(vertices_.size()))
                throw validation_error("edge " + e.id + " references unknown vertex");
            if (e.length <= 0)
                throw validation_error("nonpositive length " + rat_str(e.length) + " on edge " +
                                       e.id);
        }
        // connectivity (vertices only; an edgeless single vertex is fine)
        std::vector<char> seen(vertices_.size(), 0);
        std::queue<int32_t> q;
        q.push(0);
        seen[0] = 1;
        std::vector<std::vector<int32_t>> adj(vertices_.size());
        for (const Edge& e : edges_) {
            adj[std::size_t(e.tail)].push_back(e.head);
            adj[std::size_t(e.head)].push_back(e.tail);
        }
        std::size_t reached = 1;
        while (!q.empty()) {
            int32_t v = q.front();
            q.pop();
            for (int32_t w : adj[std::size_t(v)])
                if (!seen[std::size_t(w)]) {
                    seen[std::size_t(w)] = 1;
                    ++reached;
                    q.push(w);
                }
        }
        if (reached != vertices_.size()) throw validation_error("graph is disconnected");
    }

    void build_index() {
        stars_.assign(vertices_.size(), {});
        for (int32_t e = 0; e < int32_t(edges_.size()); ++e) {
            stars_[std::size_t(edges_[std::size_t(e)].tail)].push_back(HalfEdge{e, true});
            stars_[std::size_t(edges_[std::size_t(e)].head)].push_back(HalfEdge{e, false});
        }
    }

    std::string name_;
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, int32_t> vertex_index_;
    std::unordered_map<std::string, int32_t> edge_index_;
    std::vector<std::vector<HalfEdge>> stars_;
    Point basepoint_;
};

/// Result of subdividing a graph at a set of points: the refined model plus
/// exact point maps in both directions. Genus, the canonical divisor and all
/// Jacobian data are unchanged under the maps (tested, not assumed).
class Refinement {
public:
    const MetricGraph& model() const { return *model_; }

    /// Old point -> refined point.
    Point map_point(const Point& p) const {
        if (p.at_vertex()) return Point{vertex_map_[std::size_t(p.vertex)], -1, Rat()};
        const auto& table = edge_tables_[std::size_t(p.edge)];
        // locate the segment [cuts[i], cuts[i+1]] containing the offset
        std::size_t seg = 0;
        while (seg + 1 < table.cuts.size() && p.offset >= table.cuts[seg + 1]) ++seg;
        return model_->point_on_edge(table.segments[seg], p.offset - table.cuts[seg]);
    }

    /// Refined point -> old point.
    Point map_back(const Point& p) const {
        if (p.at_vertex()) return vertex_origin_[std::size_t(p.vertex)];
        const auto& home = segment_home_[std::size_t(p.edge)];
        return old_->point_on_edge(home.first, home.second + p.offset);
    }

    Divisor map_divisor(const Divisor& d) const {
        Divisor r;
        for (const auto& [p, c] : d.coefficients()) r.add(map_point(p), c);
        return r;
    }

    Divisor map_divisor_back(const Divisor& d) const {
        Divisor r;
        for (const auto& [p, c] : d.coefficients()) r.add(map_back(p), c);
        return r;
    }

    /// Old per-edge coefficient vector -> refined vector (each segment of an
    /// old edge inherits its coefficient; works for cycles and chains).
    template <typename T>
    std::vector<T> map_edge_vector(const std::vector<T>& v) const {
        std::vector<T> r(model_->num_edges());
        for (std::size_t e = 0; e < edge_tables_.size(); ++e)
            for (int32_t seg : edge_tables_[e].segments) r[std::size_t(seg)] = v[e];
        return r;
    }

    friend Refinement subdivide_at(const MetricGraph& g, const std::vector<Point>& pts);

private:
    struct EdgeTable {
        std::vector<Rat> cuts;        // 0 = cuts[0] < ... < cuts[k] (interior cuts only after 0)
        std::vector<int32_t> segments; // refined edge index per segment, cuts.size() entries
    };

    const MetricGraph* old_ = nullptr;
    std::shared_ptr<MetricGraph> model_;
    std::vector<int32_t> vertex_map_;                  // old vertex -> new vertex
    std::vector<EdgeTable> edge_tables_;               // per old edge
    std::vector<Point> vertex_origin_;                 // new vertex -> old point
    std::vector<std::pair<int32_t, Rat>> segment_home_; // new edge -> (old edge, start offset)
};

/// Subdivide at every edge-interior point of `pts` (vertex points are no-ops).
/// New vertex ids are "<edge>@<offset>", new edge ids "<edge>:<k>", both made
/// unique against existing ids deterministically.
inline Refinement subdivide_at(const MetricGraph& g, const std::vector<Point>& pts) {
    std::vector<std::set<Rat>> cuts(g.num_edges());
    for (const Point& p : pts) {
        if (!p.at_vertex()) cuts[std::size_t(p.edge)].insert(p.offset);
    }

    std::vector<MetricGraph::Vertex> new_vertices;
    std::vector<MetricGraph::Edge> new_edges;
    std::vector<Point> vertex_origin;
    std::vector<std::pair<int32_t, Rat>> segment_home;
    std::set<std::string> vertex_ids, edge_ids;

    Refinement ref;
    ref.old_ = &g;
    ref.vertex_map_.resize(g.num_vertices());
    ref.edge_tables_.resize(g.num_edges());

    for (int32_t v = 0; v < int32_t(g.num_vertices()); ++v) {
        ref.vertex_map_[std::size_t(v)] = int32_t(new_vertices.size());
        new_vertices.push_back({g.vertex(v).id});
        vertex_ids.insert(g.vertex(v).id);
        vertex_origin.push_back(g.point_at_vertex(v));
    }

    auto unique_id = [](std::set<std::string>& used, std::string base) {
        while (used.count(base)) base += "'";
        used.insert(base);
        return base;
    };

    // Unsplit edges keep their ids verbatim; reserve them before generating
    // segment ids so a generated "<edge>:<k>" never displaces an original id.
    for (int32_t e = 0; e < int32_t(g.num_edges()); ++e)
        if (cuts[std::size_t(e)].empty()) edge_ids.insert(g.edge(e).id);

    for (int32_t e = 0; e < int32_t(g.num_edges()); ++e) {
        const auto& ed = g.edge(e);
        auto& table = ref.edge_tables_[std::size_t(e)];
        table.cuts.push_back(Rat(0));
        std::vector<int32_t> cut_vertices;
        for (const Rat& off : cuts[std::size_t(e)]) {
            table.cuts.push_back(off);
            std::string vid = unique_id(vertex_ids, ed.id + "@" + rat_str(off));
            cut_vertices.push_back(int32_t(new_vertices.size()));
            new_vertices.push_back({vid});
            vertex_origin.push_back(Point{-1, e, off});
        }
        const std::size_t nseg = table.cuts.size();
        for (std::size_t s = 0; s < nseg; ++s) {
            Rat lo = table.cuts[s];
            Rat hi = (s + 1 < nseg) ? table.cuts[s + 1] : ed.length;
            int32_t tail = (s == 0) ? ref.vertex_map_[std::size_t(ed.tail)] : cut_vertices[s - 1];
            int32_t head =
                (s + 1 < nseg) ? cut_vertices[s] : ref.vertex_map_[std::size_t(ed.head)];
            std::string eid =
                nseg == 1 ? ed.id : unique_id(edge_ids, ed.id + ":" + std::to_string(s));
            table.segments.push_back(int32_t(new_edges.size()));
            new_edges.push_back({eid, tail, head, hi - lo});
            segment_home.emplace_back(e, lo);
        }
    }

    ref.model_ = std::make_shared<MetricGraph>(g.name(), std::move(new_vertices),
                                               std::move(new_edges));
    ref.vertex_origin_ = std::move(vertex_origin);
    ref.segment_home_ = std::move(segment_home);
    ref.model_->set_basepoint(ref.map_point(g.basepoint()));
    return ref;
}

} // namespace trop

#endif
