#ifndef TROP_SAMPLING_HPP
#define TROP_SAMPLING_HPP

#include <random>
#include <string>
#include <vector>

#include "trop/curve.hpp"
#include "trop/homology.hpp"
#include "trop/jacobian.hpp"
#include "trop/pl.hpp"
#include "trop/flow.hpp"

namespace trop {

/// Seeded generators for the randomized checks. mt19937_64 plus modulo keeps
/// every draw reproducible across platforms (std::uniform_int_distribution
/// is implementation-defined, so it is avoided on purpose).
class Sampler {
public:
    explicit Sampler(uint64_t seed) : eng_(seed) {}

    long long range(long long lo, long long hi) {
        return lo + (long long)(eng_() % (uint64_t)(hi - lo + 1));
    }

    Rat rational(long long num_lo, long long num_hi, long long den_hi) {
        return Rat(to_rat(range(num_lo, num_hi)) / to_rat(range(1, den_hi)));
    }

    Point point(const MetricGraph& g, long long den_hi = 6) {
        if (g.num_edges() == 0 || range(0, 1) == 0)
            return g.point_at_vertex(int32_t(range(0, (long long)g.num_vertices() - 1)));
        int32_t e = int32_t(range(0, (long long)g.num_edges() - 1));
        long long den = range(2, den_hi);
        long long num = range(1, den - 1);
        return g.point_on_edge(e, g.edge(e).length * to_rat(num) / to_rat(den));
    }

    std::vector<Point> point_set(const MetricGraph& g, int max_size) {
        int n = int(range(1, max_size));
        std::vector<Point> pts;
        for (int i = 0; i < n; ++i) {
            Point p = point(g);
            bool dup = false;
            for (const Point& q : pts) dup = dup || q == p;
            if (!dup) pts.push_back(p);
        }
        return pts;
    }

    Divisor divisor(const MetricGraph& g, int max_support, long long coeff_bound) {
        Divisor d;
        int n = int(range(0, max_support));
        for (int i = 0; i < n; ++i) {
            long long c = range(-coeff_bound, coeff_bound);
            d.add(point(g), c);
        }
        return d;
    }

    JacPoint jac_point(const GramForm& form, long long num_bound = 20, long long den_hi = 12) {
        JacPoint x(form.rank());
        for (std::size_t i = 0; i < form.rank(); ++i)
            x[i] = rational(-num_bound, num_bound, den_hi);
        return x;
    }

    std::vector<long long> lattice_vector(const GramForm& form, long long bound = 3) {
        std::vector<long long> n(form.rank());
        for (auto& v : n) v = range(-bound, bound);
        return n;
    }

    /// Random PL function with integer slopes: an integer combination of
    /// distance functions plus interior tents vanishing at the endpoints.
    PLFunction pl_function(const MetricGraph& g) {
        PLFunction f = constant_pl(g, to_rat(range(-3, 3)));
        int parts = int(range(1, 3));
        for (int i = 0; i < parts; ++i) {
            long long c = range(-2, 2);
            if (c == 0) continue;
            PLFunction d = distance_function(g, point_set(g, 2));
            d.scale(c);
            f += d;
        }
        if (g.num_edges() > 0 && range(0, 1) == 0) {
            int32_t e = int32_t(range(0, (long long)g.num_edges() - 1));
            long long up = range(1, 3), down = range(1, 3);
            const Rat& len = g.edge(e).length;
            Rat peak_at = to_rat(down) * len / to_rat(up + down);
            std::vector<std::vector<PLFunction::Breakpoint>> bps(g.num_edges());
            for (int32_t e2 = 0; e2 < int32_t(g.num_edges()); ++e2)
                bps[std::size_t(e2)] = {{Rat(0), Rat(0)}, {g.edge(e2).length, Rat(0)}};
            bps[std::size_t(e)] = {{Rat(0), Rat(0)},
                                   {peak_at, to_rat(up) * peak_at},
                                   {len, Rat(0)}};
            f += PLFunction(g, std::move(bps));
        }
        return f;
    }

    /// Connected multigraph with genus <= max_genus and lengths num/den,
    /// den <= 6: a random spanning tree plus `genus` extra edges (loops and
    /// parallel edges allowed).
    MetricGraph random_graph(int max_genus = 4, int max_vertices = 6) {
        int nv = int(range(1, max_vertices));
        int target_genus = int(range(0, max_genus));
        std::vector<MetricGraph::Vertex> vertices;
        for (int i = 0; i < nv; ++i) vertices.push_back({"v" + std::to_string(i)});
        std::vector<MetricGraph::Edge> edges;
        auto next_len = [&] {
            long long den = range(1, 6);
            long long num = range(1, 6);
            return Rat(to_rat(num) / to_rat(den));
        };
        for (int i = 1; i < nv; ++i) {
            int parent = int(range(0, i - 1));
            edges.push_back({"e" + std::to_string(edges.size()), parent, i, next_len()});
        }
        for (int k = 0; k < target_genus; ++k) {
            int a = int(range(0, nv - 1));
            int b = int(range(0, nv - 1));
            edges.push_back({"e" + std::to_string(edges.size()), a, b, next_len()});
        }
        return MetricGraph("random-" + std::to_string(eng_() % 100000), std::move(vertices),
                           std::move(edges));
    }

    /// Unimodular matrix with entries in [-3, 3], built from random shears.
    RatMat unimodular(std::size_t n) {
        while (true) {
            RatMat m = RatMat::identity(n);
            int ops = int(range(1, 4));
            for (int k = 0; k < ops && n >= 2; ++k) {
                std::size_t i = std::size_t(range(0, (long long)n - 1));
                std::size_t j = std::size_t(range(0, (long long)n - 1));
                if (i == j) continue;
                long long c = range(0, 1) ? 1 : -1;
                for (std::size_t col = 0; col < n; ++col) m(i, col) += to_rat(c) * m(j, col);
            }
            bool small = true;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    small = small && m(i, j) >= -3 && m(i, j) <= 3;
            if (small) return m;
        }
    }

private:
    std::mt19937_64 eng_;
};

} // namespace trop

#endif
