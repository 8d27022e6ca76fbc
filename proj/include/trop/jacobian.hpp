#ifndef TROP_JACOBIAN_HPP
#define TROP_JACOBIAN_HPP

#include <optional>
#include <vector>

#include "trop/curve.hpp"
#include "trop/homology.hpp"

namespace trop {

/// A point of J(C) = R^g / Lambda in basis coordinates: entry i is the
/// pairing with the basis form of cycle i, so the lattice sits as n -> G n.
/// Two coordinate vectors name the same point iff they differ by G n.
using JacPoint = RatVec;

inline JacPoint jac_zero(const GramForm& f) { return JacPoint(f.rank(), Rat(0)); }

/// Exact membership test for Lambda: G^{-1} x integral.
inline bool in_lattice(const GramForm& f, const RatVec& x) {
    RatVec n = f.gram_inv * x;
    for (const Rat& c : n)
        if (c.get_den() != 1) return false;
    return true;
}

inline bool jac_equal(const GramForm& f, const JacPoint& x, const JacPoint& y) {
    if (x.size() != f.rank() || y.size() != f.rank())
        throw validation_error("Jacobian coordinate length mismatch");
    if (f.rank() == 0) return true;
    return in_lattice(f, x - y);
}

/// Unique representative per class: x - G * round_half_down(G^{-1} x).
inline JacPoint jac_canonical(const GramForm& f, const JacPoint& x) {
    if (f.rank() == 0) return x;
    RatVec c = f.gram_inv * x;
    std::vector<long long> n(f.rank());
    for (std::size_t i = 0; i < f.rank(); ++i) n[i] = to_ll(round_half_down(c[i]));
    return x - f.lattice_coords(n);
}

/// Path integration data: chains from the basepoint along a fixed spanning
/// tree. The tree root may be overridden to exercise path independence; the
/// image in J(C) does not depend on it.
class AbelJacobi {
public:
    AbelJacobi(const MetricGraph& g, const GramForm& form,
               std::optional<Point> basepoint = std::nullopt,
               std::optional<int32_t> tree_root = std::nullopt)
        : g_(g), form_(form), basepoint_(basepoint.value_or(g.basepoint())) {
        root_ = tree_root.value_or(basepoint_.at_vertex() ? basepoint_.vertex
                                                          : g.edge(basepoint_.edge).tail);
        tree_ = spanning_tree(g, root_);
        chains_.resize(g.num_vertices());
    }

    /// Edge-coefficient chain of a path root -> p (fractions of edges).
    RatVec chain_to(const Point& p) const {
        if (p.at_vertex()) return vertex_chain(p.vertex);
        RatVec c = vertex_chain(g_.edge(p.edge).tail);
        c[std::size_t(p.edge)] += p.offset / g_.edge(p.edge).length;
        return c;
    }

    /// Coordinates of the point p (the curve's map into J, basepoint at 0).
    JacPoint point_coords(const Point& p) const {
        RatVec chain = chain_to(p) - chain_to(basepoint_);
        return pair_against_basis(chain);
    }

    /// mu(D) = sum a_i * integral from p0 to p_i, in basis coordinates.
    JacPoint divisor_coords(const Divisor& d) const {
        RatVec total(g_.num_edges(), Rat(0));
        long long deg = 0;
        for (const auto& [p, c] : d.coefficients()) {
            RatVec chain = chain_to(p);
            for (std::size_t e = 0; e < total.size(); ++e)
                if (chain[e] != 0) total[e] += to_rat(c) * chain[e];
            deg += c;
        }
        if (deg != 0) {
            RatVec base = chain_to(basepoint_);
            for (std::size_t e = 0; e < total.size(); ++e)
                if (base[e] != 0) total[e] -= to_rat(deg) * base[e];
        }
        return pair_against_basis(total);
    }

    const MetricGraph& graph() const { return g_; }
    const GramForm& form() const { return form_; }

private:
    RatVec vertex_chain(int32_t v) const {
        auto& slot = chains_[std::size_t(v)];
        if (!slot) slot = tree_chain<Rat>(g_, tree_, root_, v);
        return *slot;
    }

    JacPoint pair_against_basis(const RatVec& chain) const {
        JacPoint x(form_.rank());
        for (std::size_t i = 0; i < form_.rank(); ++i) x[i] = q_pair(g_, chain, form_.basis[i]);
        return x;
    }

    const MetricGraph& g_;
    const GramForm& form_;
    Point basepoint_;
    int32_t root_;
    SpanningTree tree_;
    mutable std::vector<std::optional<RatVec>> chains_;
};

inline JacPoint abel_jacobi(const MetricGraph& g, const GramForm& form, const Divisor& d,
                            std::optional<Point> basepoint = std::nullopt,
                            std::optional<int32_t> tree_root = std::nullopt) {
    return AbelJacobi(g, form, basepoint, tree_root).divisor_coords(d);
}

/// D1 ~ D2 iff the degrees match and the Jacobian images agree; by the
/// Abel-Jacobi theorem this decides linear equivalence.
inline bool lin_equiv(const MetricGraph& g, const GramForm& form, const Divisor& d1,
                      const Divisor& d2) {
    if (d1.degree() != d2.degree()) return false;
    JacPoint delta = abel_jacobi(g, form, d1 - d2);
    return jac_equal(form, delta, jac_zero(form));
}

struct TwoTorsionPoint {
    std::vector<uint8_t> bits;
    JacPoint point; // (1/2) G bits, canonical form
};

/// All 2^g two-torsion points (1/2) Lambda / Lambda, indexed by bit vectors
/// over the basis cycles. Capped at g <= 20.
inline std::vector<TwoTorsionPoint> two_torsion(const GramForm& form) {
    const std::size_t g = form.rank();
    if (g > 20) throw resource_limit_error("two-torsion enumeration capped at genus 20");
    std::vector<TwoTorsionPoint> out;
    out.reserve(std::size_t(1) << g);
    for (std::size_t mask = 0; mask < (std::size_t(1) << g); ++mask) {
        TwoTorsionPoint tt;
        tt.bits.resize(g);
        std::vector<long long> n(g);
        for (std::size_t i = 0; i < g; ++i) {
            tt.bits[i] = uint8_t((mask >> i) & 1);
            n[i] = tt.bits[i];
        }
        tt.point = jac_canonical(form, Rat(1, 2) * form.lattice_coords(n));
        out.push_back(std::move(tt));
    }
    return out;
}

inline JacPoint half_gamma_point(const GramForm& form, const std::vector<uint8_t>& bits) {
    std::vector<long long> n(bits.begin(), bits.end());
    return jac_canonical(form, Rat(1, 2) * form.lattice_coords(n));
}

} // namespace trop

#endif
