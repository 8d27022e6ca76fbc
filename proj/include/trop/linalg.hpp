#ifndef TROP_LINALG_HPP
#define TROP_LINALG_HPP

#include <cstddef>
#include <vector>

#include "trop/errors.hpp"
#include "trop/rational.hpp"

namespace trop {

using RatVec = std::vector<Rat>;

/// Dense rational matrix, row-major. Desk-scale (g is tiny), so no attempt
/// at sparsity or pivot-growth control beyond exact fraction arithmetic.
class RatMat {
public:
    RatMat() = default;
    RatMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static RatMat identity(std::size_t n) {
        RatMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const RatMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    RatMat transposed() const {
        RatMat t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    RatMat operator*(const RatMat& o) const {
        RatMat r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                if ((*this)(i, k) == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r(i, j) += (*this)(i, k) * o(k, j);
            }
        return r;
    }

    RatVec operator*(const RatVec& v) const {
        RatVec r(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != 0) r[i] += (*this)(i, j) * v[j];
        return r;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rat> a_;
};

inline RatVec operator+(const RatVec& a, const RatVec& b) {
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline RatVec operator-(const RatVec& a, const RatVec& b) {
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline RatVec operator*(const Rat& c, const RatVec& v) {
    RatVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = c * v[i];
    return r;
}

inline Rat dot(const RatVec& a, const RatVec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Solve A x = b by exact Gauss-Jordan with partial (first nonzero) pivoting.
/// Throws if A is singular.
inline RatVec solve(RatMat a, RatVec b) {
    const std::size_t n = a.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a(piv, col) == 0) ++piv;
        if (piv == n) throw std::domain_error("singular matrix in solve()");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
            std::swap(b[piv], b[col]);
        }
        Rat inv = 1 / a(col, col);
        for (std::size_t j = 0; j < n; ++j) a(col, j) *= inv;
        b[col] *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a(i, col) == 0) continue;
            Rat f = a(i, col);
            for (std::size_t j = 0; j < n; ++j) a(i, j) -= f * a(col, j);
            b[i] -= f * b[col];
        }
    }
    return b;
}

inline RatMat inverse(const RatMat& a) {
    const std::size_t n = a.rows();
    RatMat inv(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        RatVec e(n);
        e[k] = 1;
        RatVec col = solve(a, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, k) = col[i];
    }
    return inv;
}

/// G = L D L^T with L unit lower triangular and D diagonal.
/// All pivots positive iff G is positive definite, which doubles as the
/// exact positive-definiteness certificate the tests rely on.
struct LDL {
    RatMat l;
    RatVec d;
};

inline LDL ldl_decompose(const RatMat& g) {
    const std::size_t n = g.rows();
    LDL f{RatMat::identity(n), RatVec(n)};
    for (std::size_t j = 0; j < n; ++j) {
        Rat dj = g(j, j);
        for (std::size_t k = 0; k < j; ++k) dj -= f.l(j, k) * f.l(j, k) * f.d[k];
        if (dj <= 0)
            throw std::domain_error("form is not positive definite (pivot " +
                                    rat_str(dj) + " at index " + std::to_string(j) + ")");
        f.d[j] = dj;
        for (std::size_t i = j + 1; i < n; ++i) {
            Rat v = g(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= f.l(i, k) * f.l(j, k) * f.d[k];
            f.l(i, j) = v / dj;
        }
    }
    return f;
}

inline bool is_positive_definite(const RatMat& g) {
    try {
        ldl_decompose(g);
        return true;
    } catch (const std::domain_error&) {
        return false;
    }
}

} // namespace trop

#endif
