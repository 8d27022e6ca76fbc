#ifndef TROP_RATIONAL_HPP
#define TROP_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "trop/errors.hpp"

namespace trop {

/// Exact arbitrary-precision rational. Every quantity in the library
/// (lengths, distances, Jacobian coordinates, theta values) is a Rat;
/// there is no floating point anywhere in the core.
using Rat = mpq_class;
using Int = mpz_class;

inline Int floor_int(const Rat& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

inline Int ceil_int(const Rat& x) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

/// Round to the nearest integer, ties toward -inf: rhd(1/2) = 0, rhd(-1/2) = -1.
/// Used for canonical lattice reduction so every class has one representative.
inline Int round_half_down(const Rat& x) {
    return ceil_int(x - Rat(1, 2));
}

inline long long to_ll(const Int& z) {
    if (!z.fits_slong_p())
        throw resource_limit_error("integer out of machine range: " + z.get_str());
    return z.get_si();
}

/// gmpxx has no long long constructor; LP64 long is wide enough here.
inline Rat to_rat(long long v) { return Rat(static_cast<long>(v)); }

/// Parse "p/q" or "n" (strict: optional sign, digits, optional /digits).
/// Infinite-length markers are rejected up the stack with a clearer message;
/// here they are simply not numbers.
inline Rat parse_rat(const std::string& text) {
    if (text.empty()) throw validation_error("empty rational literal");
    std::size_t i = (text[0] == '+' || text[0] == '-') ? 1 : 0;
    bool digits = false, slash = false, denom_digits = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c >= '0' && c <= '9') {
            (slash ? denom_digits : digits) = true;
        } else if (c == '/' && !slash && digits) {
            slash = true;
        } else {
            throw validation_error("bad rational literal: \"" + text + "\"");
        }
    }
    if (!digits || (slash && !denom_digits))
        throw validation_error("bad rational literal: \"" + text + "\"");
    Rat r;
    if (r.set_str(text, 10) != 0)
        throw validation_error("bad rational literal: \"" + text + "\"");
    r.canonicalize();
    if (slash && r.get_den() == 0)
        throw validation_error("zero denominator: \"" + text + "\"");
    return r;
}

/// Canonical text form: "n" for integers, "p/q" otherwise.
inline std::string rat_str(const Rat& x) { return x.get_str(); }

inline bool is_infinite_marker(const std::string& s) {
    return s == "inf" || s == "Inf" || s == "INF" || s == "infinity" || s == "Infinity" ||
           s == "oo" || s == "\xe2\x88\x9e"; // UTF-8 infinity sign
}

inline Int lcm_int(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

} // namespace trop

#endif
