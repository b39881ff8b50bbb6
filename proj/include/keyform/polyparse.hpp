#pragma once

#include <string>
#include <string_view>

#include "keyform/error.hpp"
#include "keyform/lexer.hpp"
#include "keyform/polynomial.hpp"

namespace keyform {

namespace detail {

class PolyParser {
public:
    PolyParser(std::string_view text, std::string xv, std::string yv) : lx_(text), xv_(std::move(xv)), yv_(std::move(yv)) {}

    LaurentPolyXY parse() {
        LaurentPolyXY f = expr();
        if (!lx_.at_end()) lx_.fail("trailing input");
        return f;
    }

private:
    LaurentPolyXY expr() {
        bool neg = false;
        if (lx_.accept('-')) neg = true;
        else lx_.accept('+');
        LaurentPolyXY acc = term();
        if (neg) acc = -acc;
        while (true) {
            if (lx_.accept('+')) acc += term();
            else if (lx_.accept('-')) acc -= term();
            else break;
        }
        return acc;
    }

    LaurentPolyXY term() {
        LaurentPolyXY acc = factor();
        while (lx_.accept('*')) acc = acc * factor();
        return acc;
    }

    LaurentPolyXY factor() {
        std::size_t pos = lx_.pos();
        LaurentPolyXY base;
        bool is_x = false;
        if (lx_.accept('(')) {
            base = expr();
            lx_.expect(')');
        } else if (lx_.peek_digit()) {
            base = LaurentPolyXY::constant(lx_.unsigned_rational());
        } else if (lx_.peek_alpha()) {
            std::string id = lx_.identifier();
            if (id == xv_) {
                base = xy_monomial(1, 0);
                is_x = true;
            } else if (id == yv_) {
                base = xy_monomial(0, 1);
            } else {
                throw ParseError("syntax error: unknown variable '" + id + "'", pos);
            }
        } else {
            lx_.fail("expected a number, variable or '('");
        }
        if (!lx_.accept('^')) return base;
        std::size_t epos = lx_.pos();
        Rat e = lx_.exponent();
        if (!is_integer(e)) throw ParseError("syntax error: exponent must be an integer", epos);
        std::int64_t n = to_int64(e);
        if (n < 0) {
            if (!is_x) throw ParseError("syntax error: negative exponent allowed only on " + xv_, epos);
            return xy_monomial(n, 0);
        }
        return power(base, n);
    }

    Lexer lx_;
    std::string xv_, yv_;
};

}  // namespace detail

/// Parses an expression in x^{+-1} and y with + - * ^ and parentheses, e.g. "(y - x^2)^5 - x^3".
/// The variable names default to x and y; pass "u", "v" for local equations.
inline LaurentPolyXY parse_polynomial(std::string_view text, const std::string& xv = "x", const std::string& yv = "y") {
    return detail::PolyParser(text, xv, yv).parse();
}

}  // namespace keyform
