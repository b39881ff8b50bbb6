#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "keyform/error.hpp"
#include "keyform/keyforms.hpp"
#include "keyform/polynomial.hpp"
#include "keyform/puiseux.hpp"
#include "keyform/rational.hpp"
#include "keyform/semidegree.hpp"
#include "keyform/semigroup.hpp"

namespace keyform {

namespace detail {

/// p_a ... p_b for 1-based indices; 1 when a > b.
inline std::int64_t pair_product(const std::vector<PuiseuxPair>& pairs, std::size_t a, std::size_t b) {
    std::int64_t t = 1;
    for (std::size_t i = a; i <= b; ++i) t *= pairs[i - 1].p;
    return t;
}

inline Rat pair_exponent(const std::vector<PuiseuxPair>& pairs, std::size_t k) {
    return make_rat(pairs[k - 1].q, pair_product(pairs, 1, k));
}

}  // namespace detail

/// alpha_{L,C,r} for local pairs (q~_k, p_k) and r >= 0.
inline std::int64_t alpha_invariant(const std::vector<PuiseuxPair>& pairs, std::int64_t r) {
    validate_local_pairs(pairs);
    if (r < 0) throw PreconditionError("r must be nonnegative");
    const std::size_t lt = pairs.size();
    const std::int64_t p = detail::pair_product(pairs, 1, lt);
    Rat s = 0;
    for (std::size_t k = 1; k <= lt; ++k)
        s += Rat(detail::pair_product(pairs, k, lt) - detail::pair_product(pairs, k + 1, lt)) * detail::pair_exponent(pairs, k);
    return to_int64(s * p) + pairs.back().q + r;
}

/// Contractible iff q~_1 < p_1 and alpha < p^2.
inline bool is_contractible(const std::vector<PuiseuxPair>& pairs, std::int64_t r) {
    std::int64_t a = alpha_invariant(pairs, r);
    std::int64_t p = detail::pair_product(pairs, 1, pairs.size());
    return pairs.front().q < pairs.front().p && a < p * p;
}

struct VirtualPoles {
    std::vector<std::int64_t> omega_tilde;  ///< omega~_0 .. omega~_{l~}
    std::vector<std::int64_t> omegas;       ///< omega_0 .. omega_{l+1}; the last one is the generic pole
    std::size_t l = 0;
};

inline VirtualPoles virtual_poles(const std::vector<PuiseuxPair>& pairs, std::int64_t r) {
    validate_local_pairs(pairs);
    if (r < 0) throw PreconditionError("r must be nonnegative");
    const std::size_t lt = pairs.size();
    const std::int64_t p = detail::pair_product(pairs, 1, lt);
    VirtualPoles vp;
    vp.omega_tilde.push_back(p);
    for (std::size_t k = 1; k <= lt; ++k) {
        Rat s = detail::pair_exponent(pairs, k);
        for (std::size_t i = 1; i < k; ++i)
            s += Rat(detail::pair_product(pairs, i, k - 1) - detail::pair_product(pairs, i + 1, k - 1)) *
                 detail::pair_exponent(pairs, i);
        vp.omega_tilde.push_back(to_int64(s * p));
    }
    vp.l = r == 0 ? lt - 1 : lt;
    auto sq = [&](std::size_t m) {
        std::int64_t t = detail::pair_product(pairs, 1, m);
        return t * t;
    };
    vp.omegas.push_back(p);
    for (std::size_t k = 1; k <= vp.l; ++k)
        vp.omegas.push_back(sq(k - 1) * detail::pair_product(pairs, k, lt) - vp.omega_tilde[k]);
    if (r == 0)
        vp.omegas.push_back(sq(lt - 1) * pairs.back().p - vp.omega_tilde[lt]);
    else
        vp.omegas.push_back(sq(lt) - pairs.back().p * vp.omega_tilde[lt] - r);
    return vp;
}

enum class Classification { NotContractible, OnlyAlgebraic, OnlyNonAlgebraic, Both };

inline std::string to_string(Classification c) {
    switch (c) {
        case Classification::NotContractible: return "NotContractible";
        case Classification::OnlyAlgebraic: return "OnlyAlgebraic";
        case Classification::OnlyNonAlgebraic: return "OnlyNonAlgebraic";
        case Classification::Both: return "Both";
    }
    return "?";
}

struct SemigroupReport {
    VirtualPoles poles;
    std::vector<bool> s1;  ///< s1[k-1] for k = 1..l
    /// s2[k-1] is empty when (S2-k) holds, otherwise the largest offending integer.
    std::vector<std::optional<std::int64_t>> s2;
    Classification classification = Classification::NotContractible;
};

/// Evaluates (S1-k) and (S2-k) for k = 1..l and classifies the contractions of the curve germ.
inline SemigroupReport semigroup_conditions(const std::vector<PuiseuxPair>& pairs, std::int64_t r) {
    SemigroupReport rep;
    rep.poles = virtual_poles(pairs, r);
    const auto& w = rep.poles.omegas;
    const std::size_t l = rep.poles.l;
    if (!is_contractible(pairs, r)) {
        rep.classification = Classification::NotContractible;
        return rep;
    }
    for (std::size_t k = 0; k <= l + 1; ++k)
        if (w[k] <= 0)
            throw PreconditionError("virtual pole omega_" + std::to_string(k) + " = " + std::to_string(w[k]) +
                                    " is not positive for pairs " + to_string(pairs) + ", r = " + std::to_string(r));
    bool all_s1 = true, all_s2 = true;
    for (std::size_t k = 1; k <= l; ++k) {
        std::int64_t pk = pairs[k - 1].p;
        std::int64_t top = pk * w[k];
        std::vector<std::int64_t> gens(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
        SemigroupTable lower(gens, top);
        bool s1 = lower.contains(top);
        rep.s1.push_back(s1);
        all_s1 = all_s1 && s1;

        std::vector<std::int64_t> gens2(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k + 1));
        SemigroupTable upper(gens2, top);
        std::optional<std::int64_t> bad;
        for (std::int64_t a = top - 1; a > w[k + 1]; --a) {
            if (group_membership(a, gens2) && !upper.contains(a)) {
                bad = a;
                break;
            }
        }
        rep.s2.push_back(bad);
        all_s2 = all_s2 && !bad;
    }
    if (!all_s1) rep.classification = Classification::OnlyNonAlgebraic;
    else if (!all_s2) rep.classification = Classification::Both;
    else rep.classification = Classification::OnlyAlgebraic;
    return rep;
}

struct Witness {
    PuiseuxPoly curve{Orientation::Local};
    bool expected_algebraic = false;
};

namespace detail {

struct Offender {
    std::size_t k = 0;
    std::int64_t value = 0;
    Rat coeff;
};

/// First absorption that needs a negative power of x, if any.
inline std::optional<Offender> first_pole(const PuiseuxPoly& phi, std::int64_t r) {
    std::optional<Offender> hit;
    essential_key_forms(generic_dps_from_curve(local_to_degreewise(phi), r), [&](const AbsorptionEvent& ev) {
        if (!hit && ev.beta[0] < 0) hit = Offender{ev.k, ev.value, ev.coeff};
    });
    return hit;
}

/// Coefficient absorbed at (k, value); zero when no absorption happens there.
inline Rat absorbed_coeff(const PuiseuxPoly& phi, std::int64_t r, std::size_t k, std::int64_t value) {
    Rat c = 0;
    essential_key_forms(generic_dps_from_curve(local_to_degreewise(phi), r), [&](const AbsorptionEvent& ev) {
        if (ev.k == k && ev.value == value) c = ev.coeff;
    });
    return c;
}

/// Starting from `phi`, cancels each absorption with a negative x-exponent by a non-characteristic term
/// t*u^e. The coefficient at the offending value is affine in t, so two evaluations fix t.
inline PuiseuxPoly cancel_poles(PuiseuxPoly phi, const std::vector<PuiseuxPair>& pairs, std::int64_t r,
                                const std::vector<std::int64_t>& omegas) {
    const std::int64_t p = pair_product(pairs, 1, pairs.size());
    for (int iter = 0; iter < 256; ++iter) {
        auto off = first_pole(phi, r);
        if (!off) return phi;
        const std::size_t k = off->k;
        Rat e = pair_exponent(pairs, k) + make_rat(pairs[k - 1].p * omegas[k] - off->value, p);
        PuiseuxPoly probe = phi;
        probe.add_term(e, Rat(1));
        Rat slope = absorbed_coeff(probe, r, k, off->value) - off->coeff;
        if (slope == 0)
            throw InvariantViolation("cannot cancel the term at delta-value " + std::to_string(off->value) +
                                     " for curve " + to_string(phi));
        phi.add_term(e, -off->coeff / slope);
    }
    throw InvariantViolation("pole cancellation did not terminate for pairs " + to_string(pairs));
}

}  // namespace detail

/// Local curves realizing the classification.
/// The base curve carries one unit term per characteristic pair. It is the non-algebraic witness when
/// (S1) fails. Otherwise the algebraic witness is the base curve plus non-characteristic terms cancelling
/// every absorption that would need a negative power of x. For Both, the non-algebraic witness adds
/// u^e to the base curve, e = q~_k/(p_1...p_k) + r'/p, with k the first index where (S2-k) fails and
/// r' = p_k*omega_k minus the largest offending integer.
inline std::vector<Witness> witness_curves(const std::vector<PuiseuxPair>& pairs, std::int64_t r, Classification expected) {
    SemigroupReport rep = semigroup_conditions(pairs, r);
    if (rep.classification != expected)
        throw PreconditionError("requested witnesses for " + to_string(expected) + " but the data classify as " +
                                to_string(rep.classification));
    if (expected == Classification::NotContractible)
        throw PreconditionError("no witness curves exist when the germ is not contractible");
    PuiseuxPoly base(Orientation::Local);
    for (std::size_t k = 1; k <= pairs.size(); ++k) base.add_term(detail::pair_exponent(pairs, k), Rat(1));
    std::vector<Witness> out;
    if (expected == Classification::OnlyNonAlgebraic) {
        out.push_back({base, false});
        return out;
    }
    out.push_back({detail::cancel_poles(base, pairs, r, rep.poles.omegas), true});
    if (expected == Classification::Both) {
        std::size_t k = 1;
        while (!rep.s2[k - 1]) ++k;
        std::int64_t rp = pairs[k - 1].p * rep.poles.omegas[k] - *rep.s2[k - 1];
        std::int64_t p = detail::pair_product(pairs, 1, pairs.size());
        PuiseuxPoly c = base;
        c.add_term(detail::pair_exponent(pairs, k) + make_rat(rp, p), Rat(1));
        out.push_back({c, false});
    }
    return out;
}

struct AlgebraicityReport {
    CharacteristicData local_pairs;
    std::int64_t alpha = 0;
    std::int64_t p_squared = 0;
    bool contractible = false;
    std::optional<bool> algebraic;  ///< empty when not contractible and key forms were not forced
    std::optional<GenericDps> semidegree;
    std::optional<EssentialKeyForms> keys;
    std::vector<std::int64_t> wp_weights;  ///< (1, omega_0, ..., omega_{l+1}) when algebraic
};

/// Decides whether the contraction of the last exceptional curve for (C, r) is algebraic,
/// C being the local curve v = phi(u). With `force`, key forms are computed even if not contractible.
inline AlgebraicityReport is_algebraic(const PuiseuxPoly& phi, std::int64_t r, bool force = false) {
    if (phi.orientation() != Orientation::Local) throw PreconditionError("curve must be given as a local series in u");
    if (r < 0) throw PreconditionError("r must be nonnegative");
    if (phi.is_zero()) throw PreconditionError("curve series is zero");
    for (const auto& [e, c] : phi.terms())
        if (e <= 0) throw PreconditionError("curve must pass through the origin: exponent " + to_string(e) + " <= 0");
    AlgebraicityReport rep;
    rep.local_pairs = puiseux_pairs(phi);
    if (rep.local_pairs.pairs.empty()) throw PreconditionError("curve has no characteristic pair");
    rep.alpha = alpha_invariant(rep.local_pairs.pairs, r);
    std::int64_t p = rep.local_pairs.polydromy();
    rep.p_squared = p * p;
    rep.contractible = phi.leading_exponent() < 1 && rep.alpha < rep.p_squared;
    if (!rep.contractible && !force) return rep;
    rep.semidegree = generic_dps_from_curve(local_to_degreewise(phi), r);
    rep.keys = essential_key_forms(*rep.semidegree);
    if (rep.contractible) {
        rep.algebraic = is_polynomial(rep.keys->last());
        if (*rep.algebraic) {
            rep.wp_weights.push_back(1);
            rep.wp_weights.insert(rep.wp_weights.end(), rep.keys->omegas.begin(), rep.keys->omegas.end());
        }
    }
    return rep;
}

struct SinglePairResult {
    LaurentPolyXY truncated;  ///< terms of f with weight p*a + q*b below alpha = p*q + r
    bool algebraic = false;
};

/// f is a Weierstrass polynomial of degree p in v (second slot) for the curve v = u^{q/p} + ...
inline SinglePairResult single_pair_test(const LaurentPolyXY& f, std::int64_t p, std::int64_t q, std::int64_t r) {
    if (p < 2 || q < 1 || gcd64(p, q) != 1) throw PreconditionError("need p >= 2, q >= 1 and gcd(p, q) = 1");
    if (r < 0) throw PreconditionError("r must be nonnegative");
    if (!is_polynomial(f)) throw PreconditionError("f must be a polynomial");
    if (deg_y(f) != p || !(leading_coeff_y(f) == xy_monomial(0, 0)))
        throw PreconditionError("f must be monic of degree p in v");
    const std::int64_t alpha = p * q + r;
    SinglePairResult res;
    std::int64_t deg = 0;
    for (const auto& [e, c] : f.terms()) {
        if (p * e.x + q * e.y < alpha) {
            res.truncated.add_term(e, c);
            deg = std::max(deg, e.x + e.y);
        }
    }
    res.algebraic = deg <= p;
    return res;
}

struct ClosedForm {
    bool contractible = false;
    bool nonalgebraic_exists = false;
};

/// One characteristic pair (q, p): contractible iff r < p(p-q); non-algebraic contractions exist iff
/// 2p - q < r < p(p-q).
inline ClosedForm single_pair_closed_form(std::int64_t q, std::int64_t p, std::int64_t r) {
    if (p < 2 || q < 1 || gcd64(p, q) != 1) throw PreconditionError("need p >= 2, q >= 1 and gcd(p, q) = 1");
    if (r < 0) throw PreconditionError("r must be nonnegative");
    ClosedForm c;
    c.contractible = r < p * (p - q);
    c.nonalgebraic_exists = 2 * p - q < r && r < p * (p - q);
    return c;
}

}  // namespace keyform
