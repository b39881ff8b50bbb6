#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "keyform/rational.hpp"

namespace keyform {

/// Sparse polynomial over a commutative monoid of exponents.
/// `Exponent` needs operator+, a strict weak order, and a default value acting as identity.
template <class Exponent, class Coeff = Rat>
class SparsePoly {
public:
    using exponent_type = Exponent;
    using coeff_type = Coeff;
    using map_type = std::map<Exponent, Coeff>;

    SparsePoly() = default;

    static SparsePoly monomial(const Exponent& e, const Coeff& c = Coeff(1)) {
        SparsePoly p;
        p.add_term(e, c);
        return p;
    }
    static SparsePoly constant(const Coeff& c) { return monomial(Exponent{}, c); }

    const map_type& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Coeff coeff(const Exponent& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Coeff(0) : it->second;
    }

    void add_term(const Exponent& e, const Coeff& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    SparsePoly& operator+=(const SparsePoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    SparsePoly& operator-=(const SparsePoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    SparsePoly& operator*=(const Coeff& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }

    friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
    friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
    friend SparsePoly operator-(SparsePoly a) { return a *= Coeff(-1); }
    friend SparsePoly operator*(SparsePoly a, const Coeff& s) { return a *= s; }
    friend SparsePoly operator*(const Coeff& s, SparsePoly a) { return a *= s; }

    friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
        SparsePoly out;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
        return out;
    }

    friend bool operator==(const SparsePoly& a, const SparsePoly& b) { return a.terms_ == b.terms_; }

private:
    map_type terms_;
};

template <class P>
P power(const P& base, std::int64_t n) {
    P result = P::constant(typename P::coeff_type(1));
    P b = base;
    while (n > 0) {
        if (n & 1) result = result * b;
        n >>= 1;
        if (n) b = b * b;
    }
    return result;
}

struct XYExp {
    std::int64_t x = 0;
    std::int64_t y = 0;
    friend XYExp operator+(XYExp a, XYExp b) { return {a.x + b.x, a.y + b.y}; }
    friend auto operator<=>(const XYExp&, const XYExp&) = default;
};

/// Element of C[x, x^-1][y].
using LaurentPolyXY = SparsePoly<XYExp>;

/// Exponent of x^a y1^b1 ... yk^bk. Trailing zero y-exponents are trimmed so equal monomials compare equal.
struct LiftedExp {
    std::int64_t x = 0;
    std::vector<std::int64_t> y;

    LiftedExp() = default;
    LiftedExp(std::int64_t x_, std::vector<std::int64_t> y_) : x(x_), y(std::move(y_)) { trim(); }

    void trim() {
        while (!y.empty() && y.back() == 0) y.pop_back();
    }
    std::int64_t y_exp(std::size_t j) const { return j >= 1 && j <= y.size() ? y[j - 1] : 0; }

    friend LiftedExp operator+(const LiftedExp& a, const LiftedExp& b) {
        std::vector<std::int64_t> s(std::max(a.y.size(), b.y.size()), 0);
        for (std::size_t i = 0; i < a.y.size(); ++i) s[i] += a.y[i];
        for (std::size_t i = 0; i < b.y.size(); ++i) s[i] += b.y[i];
        return LiftedExp(a.x + b.x, std::move(s));
    }
    friend auto operator<=>(const LiftedExp&, const LiftedExp&) = default;
    friend bool operator==(const LiftedExp&, const LiftedExp&) = default;
};

/// Element of C[x, x^-1][y1, ..., yk].
using LiftedPoly = SparsePoly<LiftedExp>;

namespace detail {

inline std::string format_exponent(const Rat& e) {
    if (is_integer(e) && e >= 0) return to_string(e);
    return "(" + to_string(e) + ")";
}

inline std::string format_power(const std::string& var, const Rat& e) {
    if (e == 1) return var;
    return var + "^" + format_exponent(e);
}

/// Joins signed terms. An empty monomial string denotes a constant.
inline std::string join_terms(const std::vector<std::pair<Rat, std::string>>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [c, mono] : terms) {
        Rat a = c < 0 ? Rat(-c) : c;
        if (first) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        first = false;
        if (mono.empty()) {
            out += to_string(a);
        } else if (a == 1) {
            out += mono;
        } else {
            out += to_string(a) + "*" + mono;
        }
    }
    return out;
}

}  // namespace detail

/// Terms ordered by descending y-degree, then descending x-exponent.
inline std::string to_string(const LaurentPolyXY& f, const std::string& xv = "x", const std::string& yv = "y") {
    std::vector<std::pair<XYExp, Rat>> sorted(f.terms().begin(), f.terms().end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.first.y != b.first.y) return a.first.y > b.first.y;
        return a.first.x > b.first.x;
    });
    std::vector<std::pair<Rat, std::string>> terms;
    for (const auto& [e, c] : sorted) {
        std::string mono;
        if (e.y != 0) mono = detail::format_power(yv, Rat(e.y));
        if (e.x != 0) mono += (mono.empty() ? "" : "*") + detail::format_power(xv, Rat(e.x));
        terms.emplace_back(c, mono);
    }
    return detail::join_terms(terms);
}

inline std::string to_string(const LiftedPoly& f) {
    std::vector<std::pair<LiftedExp, Rat>> sorted(f.terms().begin(), f.terms().end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        std::size_t n = std::max(a.first.y.size(), b.first.y.size());
        for (std::size_t j = n; j >= 1; --j)
            if (a.first.y_exp(j) != b.first.y_exp(j)) return a.first.y_exp(j) > b.first.y_exp(j);
        return a.first.x > b.first.x;
    });
    std::vector<std::pair<Rat, std::string>> terms;
    for (const auto& [e, c] : sorted) {
        std::string mono;
        for (std::size_t j = e.y.size(); j >= 1; --j) {
            if (e.y[j - 1] == 0) continue;
            mono += (mono.empty() ? "" : "*") + detail::format_power("y" + std::to_string(j), Rat(e.y[j - 1]));
        }
        if (e.x != 0) mono += (mono.empty() ? "" : "*") + detail::format_power("x", Rat(e.x));
        terms.emplace_back(c, mono);
    }
    return detail::join_terms(terms);
}

/// Largest y-exponent; -1 for the zero polynomial.
inline std::int64_t deg_y(const LaurentPolyXY& f) {
    std::int64_t d = -1;
    for (const auto& [e, c] : f.terms()) d = std::max(d, e.y);
    return d;
}

/// Coefficient of y^deg_y(f), an element of C[x, x^-1] returned as a polynomial with y-exponent 0.
inline LaurentPolyXY leading_coeff_y(const LaurentPolyXY& f) {
    LaurentPolyXY out;
    std::int64_t d = deg_y(f);
    for (const auto& [e, c] : f.terms())
        if (e.y == d) out.add_term({e.x, 0}, c);
    return out;
}

inline bool is_polynomial(const LaurentPolyXY& f) {
    return std::all_of(f.terms().begin(), f.terms().end(), [](const auto& t) { return t.first.x >= 0; });
}

inline LaurentPolyXY xy_monomial(std::int64_t xe, std::int64_t ye, const Rat& c = Rat(1)) {
    return LaurentPolyXY::monomial({xe, ye}, c);
}

}  // namespace keyform
