#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "keyform/error.hpp"
#include "keyform/lexer.hpp"
#include "keyform/polynomial.hpp"
#include "keyform/rational.hpp"

namespace keyform {

/// Local: variable u, read by ascending exponent. DegreeWise: variable x, read by descending exponent.
enum class Orientation { Local, DegreeWise };

inline char variable_of(Orientation o) { return o == Orientation::Local ? 'u' : 'x'; }

/// Finite sum of c*t^e with rational exponents. No zero coefficients are stored.
class PuiseuxPoly {
public:
    explicit PuiseuxPoly(Orientation o = Orientation::Local) : orientation_(o) {}

    Orientation orientation() const { return orientation_; }
    const std::map<Rat, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Rat coeff(const Rat& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    void add_term(const Rat& e, const Rat& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    /// Terms in reading order: ascending for Local, descending for DegreeWise.
    std::vector<std::pair<Rat, Rat>> natural_terms() const {
        std::vector<std::pair<Rat, Rat>> out(terms_.begin(), terms_.end());
        if (orientation_ == Orientation::DegreeWise) std::reverse(out.begin(), out.end());
        return out;
    }

    /// First exponent in reading order (order for Local, degree for DegreeWise).
    Rat leading_exponent() const {
        if (terms_.empty()) throw PreconditionError("leading exponent of zero series");
        return orientation_ == Orientation::Local ? terms_.begin()->first : terms_.rbegin()->first;
    }

    /// lcm of exponent denominators.
    std::int64_t polydromy() const {
        std::int64_t n = 1;
        for (const auto& [e, c] : terms_) n = lcm64(n, to_int64(den(e)));
        return n;
    }

    /// Terms that come strictly before `e` in reading order.
    PuiseuxPoly before(const Rat& e) const {
        PuiseuxPoly out(orientation_);
        for (const auto& [x, c] : terms_)
            if (orientation_ == Orientation::Local ? x < e : x > e) out.add_term(x, c);
        return out;
    }

    friend bool operator==(const PuiseuxPoly& a, const PuiseuxPoly& b) {
        return a.orientation_ == b.orientation_ && a.terms_ == b.terms_;
    }

private:
    Orientation orientation_;
    std::map<Rat, Rat> terms_;
};

/// Characteristic pair (q_k, p_k); the exponent it marks is q_k / (p_1 ... p_k).
struct PuiseuxPair {
    std::int64_t q = 0;
    std::int64_t p = 1;
    friend bool operator==(const PuiseuxPair&, const PuiseuxPair&) = default;
};

struct CharacteristicData {
    Orientation orientation = Orientation::Local;
    std::vector<PuiseuxPair> pairs;

    std::size_t size() const { return pairs.size(); }
    /// p_1 ... p_k; k = 0 gives 1.
    std::int64_t partial_product(std::size_t k) const {
        std::int64_t n = 1;
        for (std::size_t i = 0; i < k; ++i) n *= pairs[i].p;
        return n;
    }
    std::int64_t polydromy() const { return partial_product(pairs.size()); }
    /// Exponent of the k-th pair, 1-based.
    Rat exponent(std::size_t k) const { return make_rat(pairs[k - 1].q, partial_product(k)); }

    friend bool operator==(const CharacteristicData&, const CharacteristicData&) = default;
};

/// Characteristic pairs, found by walking terms in reading order.
inline CharacteristicData puiseux_pairs(const PuiseuxPoly& phi) {
    CharacteristicData out{phi.orientation(), {}};
    std::int64_t n = 1;
    for (const auto& [e, c] : phi.natural_terms()) {
        if (in_lattice(e, n)) continue;
        std::int64_t n2 = lcm64(n, to_int64(den(e)));
        out.pairs.push_back({to_int64(e * n2), n2 / n});
        n = n2;
    }
    return out;
}

/// c*u^e maps to c*x^(1-e).
inline PuiseuxPoly local_to_degreewise(const PuiseuxPoly& phi) {
    if (phi.orientation() != Orientation::Local) throw PreconditionError("expected a local series");
    PuiseuxPoly out(Orientation::DegreeWise);
    for (const auto& [e, c] : phi.terms()) out.add_term(Rat(1) - e, c);
    return out;
}

inline PuiseuxPoly degreewise_to_local(const PuiseuxPoly& psi) {
    if (psi.orientation() != Orientation::DegreeWise) throw PreconditionError("expected a degree-wise series");
    PuiseuxPoly out(Orientation::Local);
    for (const auto& [e, c] : psi.terms()) out.add_term(Rat(1) - e, c);
    return out;
}

/// Local pairs (q~_k, p_k) to degree-wise pairs (p_1...p_k - q~_k, p_k).
inline CharacteristicData pairs_local_to_degreewise(const CharacteristicData& local) {
    CharacteristicData out{Orientation::DegreeWise, {}};
    std::int64_t n = 1;
    for (const auto& pr : local.pairs) {
        n *= pr.p;
        out.pairs.push_back({n - pr.q, pr.p});
    }
    return out;
}

/// Local pairs describing a curve germ: p_k >= 2, gcd(q~_k, p_k) = 1, exponents positive and increasing.
inline void validate_local_pairs(const std::vector<PuiseuxPair>& pairs) {
    if (pairs.empty()) throw PreconditionError("at least one characteristic pair is required");
    std::int64_t n = 1;
    Rat prev = 0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& pr = pairs[k];
        if (pr.p < 2) throw PreconditionError("pair " + std::to_string(k + 1) + ": p must be at least 2");
        if (gcd64(pr.q, pr.p) != 1) throw PreconditionError("pair " + std::to_string(k + 1) + ": gcd(q, p) != 1");
        n *= pr.p;
        Rat e = make_rat(pr.q, n);
        if (e <= prev) throw PreconditionError("pair " + std::to_string(k + 1) + ": exponents must increase");
        prev = e;
    }
}

inline std::string to_string(const PuiseuxPoly& phi) {
    std::vector<std::pair<Rat, std::string>> terms;
    std::string var(1, variable_of(phi.orientation()));
    for (const auto& [e, c] : phi.natural_terms()) terms.emplace_back(c, detail::format_power(var, e));
    return detail::join_terms(terms);
}

inline std::string to_string(const std::vector<PuiseuxPair>& pairs) {
    std::string s = "[";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (i) s += ",";
        s += "(" + std::to_string(pairs[i].q) + "," + std::to_string(pairs[i].p) + ")";
    }
    return s + "]";
}

namespace detail {

struct ParsedTerm {
    Rat coeff;
    bool xi = false;
    std::string var;
    Rat exponent;
    std::size_t pos = 0;
};

/// term := [coeff '*'] ['xi' '*'] var ['^' exponent]
inline ParsedTerm parse_series_term(Lexer& lx, bool allow_xi) {
    ParsedTerm t;
    t.pos = lx.pos();
    t.coeff = 1;
    if (lx.peek_digit()) {
        t.coeff = lx.unsigned_rational();
        lx.expect('*');
    }
    if (!lx.peek_alpha()) lx.fail("expected variable");
    std::size_t id_pos = lx.pos();
    std::string id = lx.identifier();
    if (id == "xi") {
        if (!allow_xi) throw ParseError("syntax error: unexpected 'xi'", id_pos);
        t.xi = true;
        lx.expect('*');
        id_pos = lx.pos();
        id = lx.identifier();
    }
    if (id != "u" && id != "x") throw ParseError("syntax error: unknown variable '" + id + "'", id_pos);
    t.var = id;
    t.exponent = 1;
    if (lx.accept('^')) t.exponent = lx.exponent();
    return t;
}

/// Signed term list. Returns terms with signs folded into coefficients.
inline std::vector<ParsedTerm> parse_term_list(std::string_view text, bool allow_xi) {
    Lexer lx(text);
    std::vector<ParsedTerm> out;
    if (lx.peek() == '0') {
        lx.natural();
        if (!lx.at_end()) lx.fail("trailing input");
        return out;
    }
    bool neg = false;
    if (lx.accept('-')) neg = true;
    else lx.accept('+');
    while (true) {
        ParsedTerm t = parse_series_term(lx, allow_xi);
        if (neg) t.coeff = -t.coeff;
        out.push_back(std::move(t));
        if (lx.at_end()) break;
        if (lx.accept('+')) neg = false;
        else if (lx.accept('-')) neg = true;
        else lx.fail("expected '+' or '-'");
    }
    return out;
}

}  // namespace detail

/// Parses `term (('+'|'-') term)*`. The variable fixes the orientation (u: Local, x: DegreeWise).
/// If `expected` is given, the variable must match it.
inline PuiseuxPoly parse_puiseux(std::string_view text, std::optional<Orientation> expected = std::nullopt) {
    auto terms = detail::parse_term_list(text, false);
    std::optional<Orientation> o = expected;
    std::map<Rat, std::size_t> seen;
    for (const auto& t : terms) {
        Orientation to = t.var == "u" ? Orientation::Local : Orientation::DegreeWise;
        if (o && *o != to) throw ParseError("syntax error: variable '" + t.var + "' does not match orientation", t.pos);
        o = to;
        if (seen.count(t.exponent)) throw ParseError("duplicate exponent " + to_string(t.exponent), t.pos);
        seen[t.exponent] = t.pos;
    }
    PuiseuxPoly out(o.value_or(Orientation::Local));
    for (const auto& t : terms) out.add_term(t.exponent, t.coeff);
    return out;
}

/// Parses `[(q1,p1),(q2,p2),...]`.
inline std::vector<PuiseuxPair> parse_pairs(std::string_view text) {
    detail::Lexer lx(text);
    std::vector<PuiseuxPair> out;
    lx.expect('[');
    if (lx.accept(']')) {
        if (!lx.at_end()) lx.fail("trailing input");
        return out;
    }
    do {
        lx.expect('(');
        std::int64_t q = to_int64(lx.signed_integer());
        lx.expect(',');
        std::int64_t p = to_int64(lx.signed_integer());
        lx.expect(')');
        out.push_back({q, p});
    } while (lx.accept(','));
    lx.expect(']');
    if (!lx.at_end()) lx.fail("trailing input");
    return out;
}

}  // namespace keyform
