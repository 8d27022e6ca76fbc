#ifndef TROP_HOMOLOGY_HPP
#define TROP_HOMOLOGY_HPP

#include <cstdint>
#include <queue>
#include <vector>

#include "trop/curve.hpp"
#include "trop/linalg.hpp"

namespace trop {

/// Integer cycle in edge coordinates (sign relative to tail->head).
using Cycle = std::vector<long long>;

/// Vertex the spanning constructions grow from: the basepoint if it is a
/// vertex, else the tail of the edge carrying it.
inline int32_t root_vertex(const MetricGraph& g) {
    const Point& p = g.basepoint();
    return p.at_vertex() ? p.vertex : g.edge(p.edge).tail;
}

/// BFS spanning tree from `root`; ties resolved by edge order. Returns the
/// parent half-edge per vertex (edge index, or -1 at the root) and whether
/// the parent edge is traversed tail->head when walking root -> vertex.
struct SpanningTree {
    std::vector<int32_t> parent_edge;
    std::vector<char> forward; // traversal direction root -> v
    std::vector<char> in_tree; // per edge
};

inline SpanningTree spanning_tree(const MetricGraph& g, int32_t root) {
    SpanningTree t;
    t.parent_edge.assign(g.num_vertices(), -1);
    t.forward.assign(g.num_vertices(), 0);
    t.in_tree.assign(g.num_edges(), 0);
    std::vector<char> seen(g.num_vertices(), 0);
    std::queue<int32_t> q;
    q.push(root);
    seen[std::size_t(root)] = 1;
    while (!q.empty()) {
        int32_t v = q.front();
        q.pop();
        for (const auto& he : g.star(v)) {
            const auto& ed = g.edge(he.edge);
            int32_t w = he.at_tail ? ed.head : ed.tail;
            if (seen[std::size_t(w)]) continue;
            seen[std::size_t(w)] = 1;
            t.parent_edge[std::size_t(w)] = he.edge;
            t.forward[std::size_t(w)] = he.at_tail ? 1 : 0;
            t.in_tree[std::size_t(he.edge)] = 1;
            q.push(w);
        }
    }
    return t;
}

/// Signed edge vector of the tree path root -> v.
template <typename T>
std::vector<T> tree_chain(const MetricGraph& g, const SpanningTree& t, int32_t root, int32_t v) {
    std::vector<T> chain(g.num_edges(), T(0));
    while (v != root) {
        int32_t e = t.parent_edge[std::size_t(v)];
        if (t.forward[std::size_t(v)]) {
            chain[std::size_t(e)] += 1;
            v = g.edge(e).tail;
        } else {
            chain[std::size_t(e)] -= 1;
            v = g.edge(e).head;
        }
    }
    return chain;
}

/// Fundamental cycles of the BFS spanning tree rooted at the basepoint:
/// exactly g simple cycles, each non-tree edge carried with coefficient +1
/// by its own cycle and by no other.
inline std::vector<Cycle> cycle_basis(const MetricGraph& g) {
    const int32_t root = root_vertex(g);
    SpanningTree t = spanning_tree(g, root);
    std::vector<Cycle> basis;
    for (int32_t e = 0; e < int32_t(g.num_edges()); ++e) {
        if (t.in_tree[std::size_t(e)]) continue;
        const auto& ed = g.edge(e);
        Cycle c = tree_chain<long long>(g, t, root, ed.tail);
        Cycle back = tree_chain<long long>(g, t, root, ed.head);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] -= back[i];
        c[std::size_t(e)] += 1;
        basis.push_back(std::move(c));
    }
    return basis;
}

/// Q extended bilinearly from Q(l, l) = length(l) on simple cycles:
/// sum over edges of a(e) * b(e) * length(e).
inline Rat q_pair(const MetricGraph& g, const RatVec& a, const RatVec& b) {
    Rat s = 0;
    for (std::size_t e = 0; e < g.num_edges(); ++e)
        if (a[e] != 0 && b[e] != 0) s += a[e] * b[e] * g.edge(int32_t(e)).length;
    return s;
}

inline Rat q_pair(const MetricGraph& g, const Cycle& a, const Cycle& b) {
    Rat s = 0;
    for (std::size_t e = 0; e < g.num_edges(); ++e)
        if (a[e] != 0 && b[e] != 0) s += to_rat(a[e]) * to_rat(b[e]) * g.edge(int32_t(e)).length;
    return s;
}

inline Rat q_pair(const MetricGraph& g, const RatVec& a, const Cycle& b) {
    Rat s = 0;
    for (std::size_t e = 0; e < g.num_edges(); ++e)
        if (a[e] != 0 && b[e] != 0) s += a[e] * to_rat(b[e]) * g.edge(int32_t(e)).length;
    return s;
}

/// Basis cycles plus the Gram matrix of Q, with the exact inverse and the
/// LDL^T factorization cached for lattice work. Building it certifies
/// positive definiteness (the LDL pivots must all be positive).
struct GramForm {
    std::vector<Cycle> basis;
    RatMat gram;
    RatMat gram_inv;
    LDL ldl;

    std::size_t rank() const { return basis.size(); }

    /// Coordinates of the lattice vector sum(n_i * basis_i): G * n.
    RatVec lattice_coords(const std::vector<long long>& n) const {
        RatVec x(rank());
        for (std::size_t i = 0; i < rank(); ++i)
            for (std::size_t j = 0; j < rank(); ++j)
                if (n[j] != 0) x[i] += gram(i, j) * to_rat(n[j]);
        return x;
    }
};

inline GramForm gram_matrix(const MetricGraph& g, std::vector<Cycle> basis) {
    GramForm f;
    const std::size_t n = basis.size();
    f.basis = std::move(basis);
    f.gram = RatMat(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Rat v = q_pair(g, f.basis[i], f.basis[j]);
            f.gram(i, j) = v;
            f.gram(j, i) = v;
        }
    if (n > 0) {
        f.ldl = ldl_decompose(f.gram); // throws if not positive definite
        f.gram_inv = inverse(f.gram);
    }
    return f;
}

inline GramForm gram_matrix(const MetricGraph& g) { return gram_matrix(g, cycle_basis(g)); }

} // namespace trop

#endif
