#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "keyform/error.hpp"
#include "keyform/polynomial.hpp"
#include "keyform/puiseux.hpp"
#include "keyform/rational.hpp"
#include "keyform/semidegree.hpp"

namespace keyform {

/// Output of the essential key form algorithm for a generic series with l + 1 formal pairs.
struct EssentialKeyForms {
    std::vector<LaurentPolyXY> forms;   ///< f_0 = x, f_1, ..., f_{l+1}
    std::vector<LiftedPoly> lifted;     ///< F_1, ..., F_{l+1}; lifted[k-1] lives in C[x, x^-1][y_1..y_k]
    std::vector<std::int64_t> omegas;   ///< omega_k = delta(f_k)
    std::vector<std::int64_t> ps;       ///< formal p_1..p_{l+1}
    std::vector<std::int64_t> qs;       ///< formal q_1..q_{l+1}
    std::vector<XiSeries> substituted;  ///< f_k(x, phi + xi*x^r)
    /// absorbed[k-1]: delta-values of the monomials subtracted while building f_{k+1}, in order.
    std::vector<std::vector<std::int64_t>> absorbed;
    std::vector<LaurentPolyXY> all_forms;  ///< every key form, ending with f_{l+1}

    std::size_t l() const { return forms.size() - 2; }
    const LaurentPolyXY& last() const { return forms.back(); }
};

/// One absorption step while building f_{k+1}: the leading coefficient `coeff` at delta-value `value`
/// is cancelled by coeff * x^beta_0 y_1^beta_1 ... y_k^beta_k, up to the monomial's own leading coefficient.
struct AbsorptionEvent {
    std::size_t k = 0;
    std::int64_t value = 0;
    std::vector<std::int64_t> beta;
    Rat coeff;
};

using AbsorptionObserver = std::function<void(const AbsorptionEvent&)>;

/// Solves target = a*w_0 + sum_{j=1..k} b_j*w_j with 0 <= b_j < p_j, greedily from j = k down to 1.
/// omegas holds w_0..w_k and ps holds p_1..p_k. Returns (a, b_1, ..., b_k).
inline std::vector<std::int64_t> decompose_omega(std::int64_t target, const std::vector<std::int64_t>& omegas,
                                                 const std::vector<std::int64_t>& ps) {
    std::size_t k = omegas.size() - 1;
    if (ps.size() < k) throw PreconditionError("decompose_omega: need p_1..p_k");
    std::vector<std::int64_t> beta(k + 1, 0);
    std::int64_t rem = target;
    for (std::size_t j = k; j >= 1; --j) {
        std::int64_t g = 0;
        for (std::size_t i = 0; i < j; ++i) g = std::gcd(g, omegas[i]);
        std::int64_t pj = ps[j - 1];
        bool found = false;
        for (std::int64_t b = 0; b < pj; ++b) {
            if ((rem - b * omegas[j]) % g == 0) {
                beta[j] = b;
                rem -= b * omegas[j];
                found = true;
                break;
            }
        }
        if (!found)
            throw InvariantViolation("decompose_omega: " + std::to_string(target) + " is outside the omega group at j = " +
                                     std::to_string(j));
    }
    if (rem % omegas[0] != 0)
        throw InvariantViolation("decompose_omega: remainder " + std::to_string(rem) + " not divisible by omega_0");
    beta[0] = rem / omegas[0];
    return beta;
}

/// Decomposes a delta-value lying in Z<omega_0..omega_k>, using the first k+1 essential forms.
inline std::vector<std::int64_t> omega_decompose(std::int64_t value, std::size_t k, const EssentialKeyForms& keys) {
    if (k + 1 > keys.omegas.size()) throw PreconditionError("omega_decompose: k exceeds l + 1");
    std::vector<std::int64_t> om(keys.omegas.begin(), keys.omegas.begin() + static_cast<std::ptrdiff_t>(k + 1));
    std::vector<std::int64_t> ps(keys.ps.begin(), keys.ps.begin() + static_cast<std::ptrdiff_t>(k));
    return decompose_omega(value, om, ps);
}

/// Replaces y_j by f_j in a lifted polynomial.
inline LaurentPolyXY project(const LiftedPoly& F, const std::vector<LaurentPolyXY>& forms) {
    LaurentPolyXY out;
    for (const auto& [e, c] : F.terms()) {
        LaurentPolyXY t = xy_monomial(e.x, 0, c);
        for (std::size_t j = 1; j <= e.y.size(); ++j)
            if (e.y_exp(j) > 0) t = t * power(forms.at(j), e.y_exp(j));
        out += t;
    }
    return out;
}

namespace detail {

inline std::string dump_state(const GenericDps& g, std::size_t k, const LiftedPoly& F, const XiSeries& T) {
    std::ostringstream os;
    os << "\n  series: " << to_string(g) << "\n  formal pairs: " << to_string(g.formal_pairs.pairs) << "\n  k = " << k
       << "\n  F = " << to_string(F) << "\n  substituted = " << to_string(T);
    return os.str();
}

}  // namespace detail

/// Checks the pole-order identities, monicity, descent of absorbed values and polynomiality coherence.
inline void validate_key_forms(const EssentialKeyForms& keys, const GenericDps& g) {
    const std::size_t l = g.l();
    auto fail = [&](const std::string& what) {
        throw InvariantViolation("key form invariant failed: " + what + "\n  series: " + to_string(g));
    };
    if (keys.forms.size() != l + 2 || keys.omegas.size() != l + 2) fail("expected l + 2 essential forms");
    const auto& p = keys.ps;
    const auto& q = keys.qs;
    auto tail = [&](std::size_t from) {  // p_from ... p_{l+1}
        std::int64_t t = 1;
        for (std::size_t i = from; i <= l + 1; ++i) t *= p[i - 1];
        return t;
    };
    std::int64_t gg = 0;
    for (std::size_t k = 0; k <= l; ++k) {
        gg = std::gcd(gg, keys.omegas[k]);
        if (gg != tail(k + 1)) fail("gcd(omega_0..omega_" + std::to_string(k) + ") != p_" + std::to_string(k + 1) + "...p_{l+1}");
    }
    for (std::size_t k = 1; k <= l; ++k) {
        std::int64_t rhs = p[k - 1] * keys.omegas[k] + (q[k] - q[k - 1] * p[k]) * tail(k + 2);
        if (keys.omegas[k + 1] != rhs) fail("omega recursion at k = " + std::to_string(k));
    }
    std::int64_t n = 1;
    for (std::size_t k = 1; k <= l + 1; ++k) {
        const auto& f = keys.forms[k];
        if (deg_y(f) != n) fail("deg_y(f_" + std::to_string(k) + ") != p_1...p_{k-1}");
        if (!(leading_coeff_y(f) == xy_monomial(0, 0))) fail("f_" + std::to_string(k) + " is not monic in y");
        n *= p[k - 1];
    }
    for (std::size_t k = 1; k <= keys.absorbed.size(); ++k) {
        const auto& a = keys.absorbed[k - 1];
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] <= keys.omegas[k + 1]) fail("absorbed value at or below omega_{k+1}");
            if (a[i] > p[k - 1] * keys.omegas[k]) fail("absorbed value above p_k*omega_k");
            if (i && a[i] >= a[i - 1]) fail("absorbed values do not descend");
        }
    }
    bool last_poly = is_polynomial(keys.all_forms.back());
    bool all_poly = std::all_of(keys.all_forms.begin(), keys.all_forms.end(),
                                [](const LaurentPolyXY& f) { return is_polynomial(f); });
    if (last_poly != all_poly) fail("last key form polynomial but an earlier one is not");
}

/// Essential key forms f_0..f_{l+1} of the semidegree given by g.
inline EssentialKeyForms essential_key_forms(const GenericDps& g, const AbsorptionObserver& observer = {}) {
    EssentialKeyForms out;
    const std::size_t l = g.l();
    const std::int64_t dx = g.delta_x;
    for (const auto& pr : g.formal_pairs.pairs) {
        out.ps.push_back(pr.p);
        out.qs.push_back(pr.q);
    }

    XiSeries xs;
    xs.add_term(Rat(1), XiPoly(Rat(1)));
    out.forms.push_back(xy_monomial(1, 0));
    out.substituted.push_back(xs);
    out.omegas.push_back(dx);
    out.all_forms.push_back(xy_monomial(1, 0));

    // f_1 = y - (terms of phi above the first formal exponent).
    const Rat e1 = g.formal_pairs.exponent(1);
    LaurentPolyXY f1 = xy_monomial(0, 1);
    out.all_forms.push_back(f1);
    for (const auto& [e, c] : g.phi.natural_terms()) {
        if (e <= e1) break;
        if (!is_integer(e))
            throw InvariantViolation("non-integer exponent " + to_string(e) + " before the first characteristic exponent");
        f1.add_term({to_int64(e), 0}, -c);
        out.all_forms.push_back(f1);
    }
    out.forms.push_back(f1);
    out.lifted.push_back(LiftedPoly::monomial(LiftedExp(0, {1})));
    out.substituted.push_back(substitute(f1, g));
    out.omegas.push_back(to_int64(out.substituted[1].degree() * dx));

    std::vector<PowerCache> ypow;  // powers of f_j(x, phi~)
    std::vector<std::vector<LaurentPolyXY>> fpow;
    auto form_power = [&](std::size_t j, std::int64_t b) -> const LaurentPolyXY& {
        auto& v = fpow[j];
        if (v.empty()) v.push_back(xy_monomial(0, 0));
        while (static_cast<std::int64_t>(v.size()) <= b) v.push_back(v.back() * out.forms[j]);
        return v[static_cast<std::size_t>(b)];
    };

    std::int64_t nk = 1;
    for (std::size_t k = 1; k <= l; ++k) {
        const std::int64_t pk = out.ps[k - 1];
        nk *= pk;
        ypow.clear();
        for (std::size_t j = 0; j <= k; ++j) ypow.emplace_back(out.substituted[j]);
        fpow.assign(k + 1, {});

        std::vector<std::int64_t> ymon(k, 0);
        ymon[k - 1] = pk;
        LiftedPoly F = LiftedPoly::monomial(LiftedExp(0, ymon));
        LaurentPolyXY f = form_power(k, pk);
        XiSeries T = ypow[k](static_cast<std::size_t>(pk));

        std::optional<Rat> stop;
        for (auto it = T.terms().rbegin(); it != T.terms().rend(); ++it) {
            bool hit = k < l ? !in_lattice(it->first, nk) : !it->second.is_constant();
            if (hit) {
                stop = it->first;
                break;
            }
        }
        if (!stop) throw InvariantViolation("no stopping exponent for f_" + std::to_string(k + 1) + detail::dump_state(g, k, F, T));

        std::vector<std::int64_t> om(out.omegas.begin(), out.omegas.end());
        std::vector<std::int64_t> ps(out.ps.begin(), out.ps.begin() + static_cast<std::ptrdiff_t>(k));
        std::vector<std::int64_t> absorbed;
        while (true) {
            if (T.is_zero()) throw InvariantViolation("substituted form vanished" + detail::dump_state(g, k, F, T));
            Rat d = T.degree();
            if (d == *stop) break;
            if (d < *stop) throw InvariantViolation("passed the stopping exponent" + detail::dump_state(g, k, F, T));
            const XiPoly& c = T.leading_coeff();
            if (!c.is_constant())
                throw InvariantViolation("leading coefficient depends on xi above the stopping exponent" +
                                         detail::dump_state(g, k, F, T));
            Rat target = d * dx;
            if (!is_integer(target)) throw InvariantViolation("non-integral delta-value" + detail::dump_state(g, k, F, T));
            std::int64_t n = to_int64(target);
            auto beta = decompose_omega(n, om, ps);
            if (observer) observer({k, n, beta, c.constant()});

            XiSeries S = xs.shifted(Rat(beta[0] - 1));
            LaurentPolyXY piM = xy_monomial(beta[0], 0);
            for (std::size_t j = 1; j <= k; ++j) {
                if (beta[j] == 0) continue;
                S = S * ypow[j](static_cast<std::size_t>(beta[j]));
                piM = piM * form_power(j, beta[j]);
            }
            if (S.degree() != d || !S.leading_coeff().is_constant())
                throw InvariantViolation("absorbing monomial has the wrong leading term" + detail::dump_state(g, k, F, T));
            Rat a = c.constant() / S.leading_coeff().constant();
            std::vector<std::int64_t> mon(beta.begin() + 1, beta.end());
            F.add_term(LiftedExp(beta[0], mon), -a);
            piM *= a;
            f -= piM;
            S *= a;
            T -= S;
            absorbed.push_back(n);
            out.all_forms.push_back(f);
        }
        if (absorbed.empty()) out.all_forms.push_back(f);
        if (k < l && !T.leading_coeff().is_constant())
            throw InvariantViolation("f_" + std::to_string(k + 1) + " has a xi-dependent leading term" +
                                     detail::dump_state(g, k, F, T));
        out.absorbed.push_back(std::move(absorbed));
        out.forms.push_back(std::move(f));
        out.lifted.push_back(std::move(F));
        out.omegas.push_back(to_int64(*stop * dx));
        out.substituted.push_back(std::move(T));
    }
    validate_key_forms(out, g);
    return out;
}

/// Every key form in order: x, y, the partial sums leading to f_1, then each intermediate form.
inline std::vector<LaurentPolyXY> all_key_forms(const GenericDps& g) { return essential_key_forms(g).all_forms; }

}  // namespace keyform
