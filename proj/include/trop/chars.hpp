#ifndef TROP_CHARS_HPP
#define TROP_CHARS_HPP

#include <stdexcept>
#include <vector>

#include "trop/theta.hpp"

namespace trop {

/// One theta characteristic: the gamma bits over the basis cycles, the
/// explicit effective-side divisor K^-, its class in J(C), the two-torsion
/// point (1/2) gamma, and the effectiveness verdict from Riemann's theorem.
struct ThetaCharacteristic {
    std::vector<uint8_t> bits;
    Divisor k_minus;
    JacPoint cls;
    JacPoint half_gamma;
    bool effective;
};

/// All 2^g theta characteristics. The gamma = 0 row uses the basepoint
/// moderator K^-_{p0}. Postconditions of the classification theorem are
/// checked here and violations reported as logic errors: (a) the map
/// gamma -> K_gamma is affine over Z/2 (K_gamma - K_0 = gamma/2), (b) every
/// class doubles to mu(K), (c) exactly the gamma = 0 row is non-effective.
inline std::vector<ThetaCharacteristic> theta_characteristics(const MetricGraph& g,
                                                              const GramForm& form) {
    const std::size_t rank = form.rank();
    if (rank > 20) throw resource_limit_error("theta characteristics capped at genus 20");

    const KappaClass kap = compute_kappa(g, form);
    const JacPoint mu_k = abel_jacobi(g, form, g.canonical_divisor());

    std::vector<ThetaCharacteristic> out;
    out.reserve(std::size_t(1) << rank);
    for (std::size_t mask = 0; mask < (std::size_t(1) << rank); ++mask) {
        ThetaCharacteristic tc;
        tc.bits.resize(rank);
        for (std::size_t i = 0; i < rank; ++i) tc.bits[i] = uint8_t((mask >> i) & 1);
        if (mask == 0) {
            tc.k_minus = moderator(g, {g.basepoint()}, FlowSign::minus);
        } else {
            GammaClass gamma = gamma_support(g, form.basis, tc.bits);
            tc.k_minus = char_divisor(g, gamma, FlowSign::minus);
        }
        tc.cls = jac_canonical(form, abel_jacobi(g, form, tc.k_minus));
        tc.half_gamma = half_gamma_point(form, tc.bits);
        tc.effective = effective_class_test(form, kap, tc.cls);
        out.push_back(std::move(tc));
    }

    const JacPoint& cls0 = out.front().cls;
    std::size_t non_effective = 0;
    for (std::size_t m = 0; m < out.size(); ++m) {
        if (!jac_equal(form, out[m].cls - cls0, out[m].half_gamma))
            throw std::logic_error("theta characteristic " + std::to_string(m) +
                                   " violates K_gamma - K_0 = gamma/2");
        JacPoint doubled = out[m].cls + out[m].cls;
        if (!jac_equal(form, doubled, mu_k))
            throw std::logic_error("theta characteristic " + std::to_string(m) +
                                   " does not double to mu(K)");
        if (!out[m].effective) {
            ++non_effective;
            if (m != 0)
                throw std::logic_error("non-effective characteristic at gamma != 0");
        }
    }
    if (non_effective != 1)
        throw std::logic_error("expected exactly one non-effective characteristic, found " +
                               std::to_string(non_effective));
    return out;
}

} // namespace trop

#endif
