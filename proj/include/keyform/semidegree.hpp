#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "keyform/error.hpp"
#include "keyform/polynomial.hpp"
#include "keyform/puiseux.hpp"
#include "keyform/rational.hpp"

namespace keyform {

/// Dense polynomial in xi; index i holds the coefficient of xi^i. No trailing zeros.
class XiPoly {
public:
    XiPoly() = default;
    explicit XiPoly(Rat c) {
        if (c != 0) c_.push_back(std::move(c));
    }
    static XiPoly xi() {
        XiPoly p;
        p.c_ = {Rat(0), Rat(1)};
        return p;
    }

    const std::vector<Rat>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    Rat constant() const { return c_.empty() ? Rat(0) : c_[0]; }
    std::int64_t degree() const { return static_cast<std::int64_t>(c_.size()) - 1; }

    XiPoly& operator+=(const XiPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    XiPoly& operator-=(const XiPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    XiPoly& operator*=(const Rat& s) {
        for (auto& v : c_) v *= s;
        trim();
        return *this;
    }
    friend XiPoly operator*(const XiPoly& a, const XiPoly& b) {
        XiPoly out;
        if (a.is_zero() || b.is_zero()) return out;
        out.c_.assign(a.c_.size() + b.c_.size() - 1, Rat(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
        out.trim();
        return out;
    }
    friend bool operator==(const XiPoly&, const XiPoly&) = default;

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rat> c_;
};

inline std::string to_string(const XiPoly& p) {
    std::vector<std::pair<Rat, std::string>> terms;
    for (std::size_t i = p.coeffs().size(); i-- > 0;)
        if (p.coeffs()[i] != 0) terms.emplace_back(p.coeffs()[i], i == 0 ? "" : detail::format_power("xi", Rat(i)));
    return detail::join_terms(terms);
}

/// Finite sum of (polynomial in xi) * x^e over rational e.
class XiSeries {
public:
    const std::map<Rat, XiPoly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    static XiSeries constant(const Rat& c) {
        XiSeries s;
        s.add_term(Rat(0), XiPoly(c));
        return s;
    }

    void add_term(const Rat& e, const XiPoly& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    XiPoly coeff(const Rat& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? XiPoly() : it->second;
    }

    /// Largest exponent with a nonzero coefficient.
    Rat degree() const {
        if (terms_.empty()) throw PreconditionError("degree of the zero series");
        return terms_.rbegin()->first;
    }
    const XiPoly& leading_coeff() const {
        if (terms_.empty()) throw PreconditionError("leading coefficient of the zero series");
        return terms_.rbegin()->second;
    }

    XiSeries& operator+=(const XiSeries& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    XiSeries& operator-=(const XiSeries& o) {
        for (const auto& [e, c] : o.terms_) {
            XiPoly n = c;
            n *= Rat(-1);
            add_term(e, n);
        }
        return *this;
    }
    XiSeries& operator*=(const Rat& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }
    /// Multiplies by x^k.
    XiSeries shifted(const Rat& k) const {
        XiSeries out;
        for (const auto& [e, c] : terms_) out.terms_.emplace(e + k, c);
        return out;
    }

    friend XiSeries operator*(const XiSeries& a, const XiSeries& b) {
        XiSeries out;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
        return out;
    }
    friend bool operator==(const XiSeries&, const XiSeries&) = default;

private:
    std::map<Rat, XiPoly> terms_;
};

inline std::string to_string(const XiSeries& s) {
    std::string out;
    for (auto it = s.terms().rbegin(); it != s.terms().rend(); ++it) {
        if (!out.empty()) out += " + ";
        out += "(" + to_string(it->second) + ")*" + detail::format_power("x", it->first);
    }
    return out.empty() ? "0" : out;
}

/// The generic degree-wise Puiseux series phi(x) + xi*x^r. Every exponent of phi exceeds r.
/// `formal_pairs` are the pairs of phi followed by the pair of r; delta_x is their polydromy.
struct GenericDps {
    PuiseuxPoly phi{Orientation::DegreeWise};
    Rat r;
    CharacteristicData formal_pairs;
    std::int64_t delta_x = 1;

    /// Number of pairs of phi; formal_pairs has l + 1 entries.
    std::size_t l() const { return formal_pairs.size() - 1; }
};

inline GenericDps make_generic_dps(PuiseuxPoly phi, Rat r) {
    if (phi.orientation() != Orientation::DegreeWise) throw PreconditionError("generic series must be degree-wise");
    for (const auto& [e, c] : phi.terms())
        if (e <= r) throw PreconditionError("exponent " + to_string(e) + " of phi is not above r = " + to_string(r));
    GenericDps g;
    g.formal_pairs = puiseux_pairs(phi);
    std::int64_t n = g.formal_pairs.polydromy();
    std::int64_t n2 = lcm64(n, to_int64(den(r)));
    g.formal_pairs.pairs.push_back({to_int64(r * n2), n2 / n});
    g.delta_x = n2;
    g.phi = std::move(phi);
    g.r = std::move(r);
    return g;
}

/// Semidegree attached to the curve psi = 0 (degree-wise) and r >= 0: r_delta = (q - r)/p where q/p is
/// the last characteristic exponent of psi, and phi keeps the terms of psi above r_delta.
inline GenericDps generic_dps_from_curve(const PuiseuxPoly& psi, std::int64_t r) {
    if (psi.orientation() != Orientation::DegreeWise) throw PreconditionError("curve series must be degree-wise");
    if (r < 0) throw PreconditionError("r must be nonnegative");
    CharacteristicData cd = puiseux_pairs(psi);
    if (cd.pairs.empty()) throw PreconditionError("curve series has no characteristic pair");
    std::int64_t p = cd.polydromy();
    Rat rd = cd.exponent(cd.size()) - make_rat(r, p);
    PuiseuxPoly phi(Orientation::DegreeWise);
    for (const auto& [e, c] : psi.terms())
        if (e > rd) phi.add_term(e, c);
    return make_generic_dps(std::move(phi), rd);
}

inline std::string to_string(const GenericDps& g) {
    std::string s = g.phi.is_zero() ? std::string() : to_string(g.phi) + " + ";
    return s + "xi*" + detail::format_power("x", g.r);
}

/// Parses a degree-wise series with exactly one term of the form `xi*x^e`.
inline GenericDps parse_generic_dps(std::string_view text) {
    auto terms = detail::parse_term_list(text, true);
    PuiseuxPoly phi(Orientation::DegreeWise);
    std::optional<Rat> r;
    std::map<Rat, bool> seen;
    for (const auto& t : terms) {
        if (t.var != "x") throw ParseError("syntax error: generic series must use variable x", t.pos);
        if (seen.count(t.exponent)) throw ParseError("duplicate exponent " + to_string(t.exponent), t.pos);
        seen[t.exponent] = true;
        if (t.xi) {
            if (r) throw ParseError("syntax error: more than one xi term", t.pos);
            if (t.coeff != 1) throw ParseError("syntax error: xi term must have coefficient 1", t.pos);
            r = t.exponent;
        } else {
            phi.add_term(t.exponent, t.coeff);
        }
    }
    if (!r) throw ParseError("syntax error: missing xi term", text.size());
    return make_generic_dps(std::move(phi), *r);
}

/// phi + xi*x^r as an XiSeries.
inline XiSeries generic_series(const GenericDps& g) {
    XiSeries s;
    for (const auto& [e, c] : g.phi.terms()) s.add_term(e, XiPoly(c));
    s.add_term(g.r, XiPoly::xi());
    return s;
}

/// Caches successive powers of a series.
class PowerCache {
public:
    explicit PowerCache(XiSeries base) {
        pw_.push_back(XiSeries::constant(Rat(1)));
        pw_.push_back(std::move(base));
    }
    const XiSeries& operator()(std::size_t n) {
        while (pw_.size() <= n) pw_.push_back(pw_.back() * pw_[1]);
        return pw_[n];
    }

private:
    std::vector<XiSeries> pw_;
};

/// f(x, phi + xi*x^r).
inline XiSeries substitute(const LaurentPolyXY& f, const GenericDps& g) {
    PowerCache pw(generic_series(g));
    XiSeries out;
    for (const auto& [e, c] : f.terms()) {
        if (e.y < 0) throw PreconditionError("negative y-exponent");
        XiSeries t = pw(static_cast<std::size_t>(e.y)).shifted(Rat(e.x));
        t *= c;
        out += t;
    }
    return out;
}

/// delta(f) = delta_x * deg_x f(x, phi + xi*x^r). Zero has no semidegree.
inline std::int64_t semidegree_eval(const LaurentPolyXY& f, const GenericDps& g) {
    if (f.is_zero()) throw PreconditionError("semidegree of the zero polynomial");
    XiSeries s = substitute(f, g);
    if (s.is_zero()) throw InvariantViolation("f(x, phi + xi*x^r) vanished for nonzero f = " + to_string(f));
    return to_int64(s.degree() * g.delta_x);
}

}  // namespace keyform
