#pragma once

#include "toral/error.hpp"
#include "toral/field/number_field.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace toral {

namespace detail {

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    bool done() {
        skip();
        return pos_ >= s_.size();
    }
    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() != c)
            return false;
        ++pos_;
        return true;
    }
    void expect(char c) {
        if (!accept(c))
            fail(std::string("expected '") + c + "'");
    }
    bool at_digit() { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }
    Integer integer() {
        skip();
        std::size_t b = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (b == pos_)
            fail("expected an integer");
        return Integer(s_.substr(b, pos_ - b));
    }
    long small_exponent() {
        std::size_t at = (skip(), pos_);
        Integer e = integer();
        if (e > 100000)
            throw ParseError("exponent " + e.get_str() + " too large", at);
        return e.get_si();
    }
    [[noreturn]] void fail(const std::string& what) {
        skip();
        std::string tok = pos_ < s_.size() ? "'" + std::string(1, s_[pos_]) + "'" : "end of input";
        throw ParseError(what + ", found " + tok, pos_);
    }
    std::size_t pos() const { return pos_; }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Integer polynomial in x: TERM (('+'|'-') TERM)*, TERM := [INT '*'] 'x' ['^' INT] | INT.
inline IntPoly parse_poly(const std::string& spec) {
    detail::Lexer lx(spec);
    std::vector<Integer> c;
    auto add = [&](std::size_t k, const Integer& v) {
        if (c.size() <= k)
            c.resize(k + 1, Integer(0));
        c[k] += v;
    };
    bool first = true;
    while (true) {
        Integer sign = 1;
        if (lx.accept('-'))
            sign = -1;
        else if (!lx.accept('+') && !first)
            lx.fail("expected '+' or '-'");
        first = false;
        Integer coef = 1;
        bool have_int = false;
        if (lx.at_digit()) {
            coef = lx.integer();
            have_int = true;
            if (!lx.accept('*')) {
                add(0, sign * coef);
                if (lx.done())
                    break;
                continue;
            }
        }
        if (!lx.accept('x'))
            lx.fail(have_int ? "expected 'x' after '*'" : "expected a term");
        std::size_t k = 1;
        if (lx.accept('^'))
            k = static_cast<std::size_t>(lx.small_exponent());
        add(k, sign * coef);
        if (lx.done())
            break;
    }
    return IntPoly(c);
}

inline Field parse_field(const std::string& spec) {
    IntPoly f = parse_poly(spec);
    if (f.degree() < 1)
        throw InputError("parse_field: polynomial must be nonconstant");
    Integer g = content(f);
    if (g != 1)
        throw InputError("parse_field: polynomial " + f.to_string("x") + " must have content 1");
    return make_field(f);
}

namespace detail {

// expr := term (('+'|'-') term)*; term := unary (('*'|'/') unary)*;
// unary := ('-'|'+') unary | power; power := primary ['^' INT]; primary := INT | 'a' | '(' expr ')'
class ElementParser {
public:
    ElementParser(const std::string& s, Field k) : lx_(s), k_(std::move(k)) {}

    FieldElement parse() {
        FieldElement x = expr();
        if (!lx_.done())
            lx_.fail("unexpected token");
        return x;
    }

private:
    FieldElement expr() {
        FieldElement x = term();
        while (true) {
            if (lx_.accept('+'))
                x = x + term();
            else if (lx_.accept('-'))
                x = x - term();
            else
                return x;
        }
    }
    FieldElement term() {
        FieldElement x = unary();
        while (true) {
            if (lx_.accept('*'))
                x = x * unary();
            else if (lx_.peek() == '/') {
                std::size_t at = lx_.pos();
                lx_.accept('/');
                FieldElement y = unary();
                if (y.is_zero())
                    throw DivisionByZero("division by zero at position " + std::to_string(at));
                x = x / y;
            } else
                return x;
        }
    }
    FieldElement unary() {
        if (lx_.accept('-'))
            return -unary();
        if (lx_.accept('+'))
            return unary();
        return power();
    }
    FieldElement power() {
        FieldElement x = primary();
        if (lx_.accept('^'))
            x = x.pow(Integer(lx_.small_exponent()));
        return x;
    }
    FieldElement primary() {
        if (lx_.at_digit())
            return FieldElement::from_rational(k_, Rational(lx_.integer()));
        if (lx_.accept('a'))
            return FieldElement::generator(k_);
        if (lx_.accept('(')) {
            FieldElement x = expr();
            lx_.expect(')');
            return x;
        }
        lx_.fail("expected a number, 'a' or '('");
    }

    Lexer lx_;
    Field k_;
};

} // namespace detail

/// Exact element of K written in the generator 'a'.
inline FieldElement parse_element(const std::string& spec, const Field& k) {
    return detail::ElementParser(spec, k).parse();
}

/// Positive rational "p" or "p/q".
inline Rational parse_rational(const std::string& spec) {
    detail::Lexer lx(spec);
    Integer sign = lx.accept('-') ? -1 : 1;
    Integer p = lx.integer();
    Integer q = 1;
    if (lx.accept('/'))
        q = lx.integer();
    if (!lx.done())
        lx.fail("unexpected token");
    if (q == 0)
        throw DivisionByZero("rational with zero denominator: " + spec);
    return make_rational(Integer(sign * p), q);
}

} // namespace toral
