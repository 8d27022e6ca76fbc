#ifndef TROP_IO_HPP
#define TROP_IO_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "trop/curve.hpp"
#include "trop/flow.hpp"
#include "trop/linalg.hpp"

namespace trop {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string require_string(const Json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_string())
        throw validation_error(ctx + ": missing string field \"" + key + "\"");
    return j[key].get<std::string>();
}

inline Rat parse_length(const std::string& text, const std::string& edge_id) {
    if (is_infinite_marker(text))
        throw validation_error("edge " + edge_id +
                               " has infinite length; infinite leaves are not supported "
                               "(prune the curve to compact form first)");
    return parse_rat(text);
}

} // namespace detail

/// Parse and validate a curve file. The basepoint defaults to the first
/// listed vertex.
inline MetricGraph load_curve(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("curve file parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges") ||
        !j["vertices"].is_array() || !j["edges"].is_array())
        throw validation_error("curve file must be an object with vertices and edges arrays");

    std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>()
                                                                   : std::string("curve");
    std::vector<MetricGraph::Vertex> vertices;
    for (const Json& vj : j["vertices"])
        vertices.push_back({detail::require_string(vj, "id", "vertex")});

    std::vector<MetricGraph::Edge> edges;
    std::vector<std::pair<std::string, std::string>> endpoints;
    for (const Json& ej : j["edges"]) {
        std::string id = detail::require_string(ej, "id", "edge");
        std::string tail = detail::require_string(ej, "tail", "edge " + id);
        std::string head = detail::require_string(ej, "head", "edge " + id);
        std::string len = detail::require_string(ej, "length", "edge " + id);
        edges.push_back({id, -1, -1, detail::parse_length(len, id)});
        endpoints.emplace_back(tail, head);
    }
    // resolve endpoint ids after vertex uniqueness is known
    {
        std::unordered_map<std::string, int32_t> vidx;
        for (std::size_t i = 0; i < vertices.size(); ++i) vidx.emplace(vertices[i].id, int32_t(i));
        for (std::size_t i = 0; i < edges.size(); ++i) {
            auto t = vidx.find(endpoints[i].first);
            auto h = vidx.find(endpoints[i].second);
            if (t == vidx.end())
                throw validation_error("edge " + edges[i].id + ": unknown tail vertex \"" +
                                       endpoints[i].first + "\"");
            if (h == vidx.end())
                throw validation_error("edge " + edges[i].id + ": unknown head vertex \"" +
                                       endpoints[i].second + "\"");
            edges[i].tail = t->second;
            edges[i].head = h->second;
        }
    }

    MetricGraph g(name, std::move(vertices), std::move(edges));
    if (j.contains("basepoint")) {
        const Json& bp = j["basepoint"];
        if (bp.contains("vertex")) {
            g.set_basepoint(g.point_at_vertex(
                g.vertex_index(detail::require_string(bp, "vertex", "basepoint"))));
        } else if (bp.contains("edge")) {
            int32_t e = g.edge_index(detail::require_string(bp, "edge", "basepoint"));
            Rat off = parse_rat(detail::require_string(bp, "offset", "basepoint"));
            g.set_basepoint(g.point_on_edge(e, off));
        } else {
            throw validation_error("basepoint must name a vertex or an edge with offset");
        }
    }
    return g;
}

inline MetricGraph load_curve_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open curve file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_curve(buf.str());
}

inline Point parse_point(const MetricGraph& g, const Json& pj) {
    if (pj.contains("vertex"))
        return g.point_at_vertex(g.vertex_index(detail::require_string(pj, "vertex", "point")));
    if (pj.contains("edge")) {
        int32_t e = g.edge_index(detail::require_string(pj, "edge", "point"));
        Rat off = parse_rat(detail::require_string(pj, "offset", "point"));
        return g.point_on_edge(e, off);
    }
    throw validation_error("point must name a vertex or an edge with offset");
}

inline Divisor load_divisor(const MetricGraph& g, const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("divisor file parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("divisor") || !j["divisor"].is_array())
        throw validation_error("divisor file must be an object with a divisor array");
    Divisor d;
    for (const Json& entry : j["divisor"]) {
        if (!entry.contains("point") || !entry.contains("coeff") ||
            !entry["coeff"].is_number_integer())
            throw validation_error("divisor entries need a point and an integer coeff");
        d.add(parse_point(g, entry["point"]), entry["coeff"].get<long long>());
    }
    return d;
}

inline Divisor load_divisor_file(const MetricGraph& g, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open divisor file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_divisor(g, buf.str());
}

inline Json point_to_json(const MetricGraph& g, const Point& p) {
    Json j;
    if (p.at_vertex()) {
        j["vertex"] = g.vertex(p.vertex).id;
    } else {
        j["edge"] = g.edge(p.edge).id;
        j["offset"] = rat_str(p.offset);
    }
    return j;
}

inline Json divisor_to_json(const MetricGraph& g, const Divisor& d) {
    Json arr = Json::array();
    for (const auto& [p, c] : d.coefficients()) {
        Json entry;
        entry["point"] = point_to_json(g, p);
        entry["coeff"] = c;
        arr.push_back(std::move(entry));
    }
    return arr;
}

inline Json rat_vec_to_json(const RatVec& v) {
    Json arr = Json::array();
    for (const Rat& x : v) arr.push_back(rat_str(x));
    return arr;
}

inline Json mat_to_json(const RatMat& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rat_str(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

} // namespace detail

/// Plain DOT rendering of the curve (undirected; the stored orientation is a
/// coordinate convention, so edges are drawn dir=none with lengths).
inline std::string curve_to_dot(const MetricGraph& g) {
    std::ostringstream out;
    out << "digraph \"" << detail::dot_escape(g.name()) << "\" {\n";
    for (const auto& v : g.vertices())
        out << "  \"" << detail::dot_escape(v.id) << "\";\n";
    for (const auto& e : g.edges())
        out << "  \"" << detail::dot_escape(g.vertex(e.tail).id) << "\" -> \""
            << detail::dot_escape(g.vertex(e.head).id) << "\" [dir=none, label=\""
            << detail::dot_escape(e.id) << " (" << rat_str(e.length) << ")\"];\n";
    out << "}\n";
    return out.str();
}

/// Oriented refined model in DOT: edge direction is the flow, ridge vertices
/// are diamonds.
inline std::string orientation_to_dot(const FlowOrientation& fo, const std::string& title) {
    const MetricGraph& m = *fo.model;
    std::ostringstream out;
    out << "digraph \"" << detail::dot_escape(title) << "\" {\n";
    for (int32_t v = 0; v < int32_t(m.num_vertices()); ++v) {
        out << "  \"" << detail::dot_escape(m.vertex(v).id) << "\"";
        if (fo.is_ridge[std::size_t(v)]) out << " [shape=diamond]";
        out << ";\n";
    }
    for (int32_t e = 0; e < int32_t(m.num_edges()); ++e) {
        const auto& ed = m.edge(e);
        int32_t a = ed.tail, b = ed.head;
        if (fo.dir[std::size_t(e)] < 0) std::swap(a, b);
        out << "  \"" << detail::dot_escape(m.vertex(a).id) << "\" -> \""
            << detail::dot_escape(m.vertex(b).id) << "\" [label=\""
            << detail::dot_escape(ed.id) << " (" << rat_str(ed.length) << ")\"";
        if (!fo.on_support.empty() && fo.on_support[std::size_t(e)]) out << ", style=bold";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace trop

#endif
