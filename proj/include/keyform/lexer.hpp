#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "keyform/error.hpp"
#include "keyform/rational.hpp"

namespace keyform::detail {

/// Character cursor shared by the series, pairs and polynomial parsers.
class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::size_t pos() const { return pos_; }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError("syntax error: " + msg, pos_); }

    bool peek_digit() { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }
    bool peek_alpha() { return std::isalpha(static_cast<unsigned char>(peek())) != 0; }

    Integer natural() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected digits");
        return Integer(std::string(text_.substr(start, pos_ - start)));
    }

    Integer signed_integer() {
        bool neg = false;
        if (accept('-')) neg = true;
        else accept('+');
        Integer v = natural();
        return neg ? Integer(-v) : v;
    }

    /// `a` or `a/b` with a, b natural numbers.
    Rat unsigned_rational() {
        Integer n = natural();
        if (peek() == '/') {
            std::size_t slash = pos_;
            ++pos_;
            Integer d = natural();
            if (d == 0) throw ParseError("zero denominator", slash);
            return Rat(n, d);
        }
        return Rat(n);
    }

    /// Exponent after '^': a signed integer, or `(a/b)` with optional sign.
    Rat exponent() {
        if (accept('(')) {
            bool neg = false;
            if (accept('-')) neg = true;
            else accept('+');
            Rat v = unsigned_rational();
            expect(')');
            return neg ? Rat(-v) : v;
        }
        return Rat(signed_integer());
    }

    std::string identifier() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (start == pos_) fail("expected identifier");
        return std::string(text_.substr(start, pos_ - start));
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace keyform::detail
