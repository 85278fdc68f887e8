#pragma once

#include "toral/arith/ball.hpp"
#include "toral/arith/numbers.hpp"
#include "toral/error.hpp"

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace toral {

/// Dense univariate polynomial, coefficients stored from the constant term up.
/// The zero polynomial has no coefficients.
template <typename T>
class Poly {
public:
    Poly() = default;
    Poly(std::initializer_list<T> c) : c_(c) { trim(); }
    explicit Poly(std::vector<T> c) : c_(std::move(c)) { trim(); }

    static Poly constant(const T& v) { return Poly(std::vector<T>{v}); }
    static Poly monomial(const T& v, std::size_t k) {
        std::vector<T> c(k + 1, T(0));
        c[k] = v;
        return Poly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    /// Degree; -1 for the zero polynomial.
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const T& lc() const { return c_.back(); }
    const std::vector<T>& coeffs() const { return c_; }
    T coeff(std::size_t k) const { return k < c_.size() ? c_[k] : T(0); }
    std::size_t size() const { return c_.size(); }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<T> c(std::max(a.size(), b.size()), T(0));
        for (std::size_t i = 0; i < a.size(); ++i)
            c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.size(); ++i)
            c[i] += b.c_[i];
        return Poly(std::move(c));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<T> c(std::max(a.size(), b.size()), T(0));
        for (std::size_t i = 0; i < a.size(); ++i)
            c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.size(); ++i)
            c[i] -= b.c_[i];
        return Poly(std::move(c));
    }
    Poly operator-() const {
        std::vector<T> c = c_;
        for (auto& x : c)
            x = -x;
        return Poly(std::move(c));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero())
            return Poly();
        std::vector<T> c(a.size() + b.size() - 1, T(0));
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                c[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(c));
    }
    friend Poly operator*(const T& k, const Poly& p) {
        std::vector<T> c = p.c_;
        for (auto& x : c)
            x *= k;
        return Poly(std::move(c));
    }

    Poly derivative() const {
        if (c_.size() <= 1)
            return Poly();
        std::vector<T> c(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i)
            c[i - 1] = c_[i] * T(static_cast<long>(i));
        return Poly(std::move(c));
    }

    /// Horner evaluation at an exact value.
    template <typename U>
    U eval(const U& x) const {
        U r(0);
        for (std::size_t i = c_.size(); i-- > 0;)
            r = r * x + U(c_[i]);
        return r;
    }

    Ball eval_ball(const Ball& x) const {
        Ball r(x.prec());
        for (std::size_t i = c_.size(); i-- > 0;)
            r = r * x + coeff_ball(c_[i], x.prec());
        return r;
    }

    /// p(q(t)).
    Poly compose(const Poly& q) const {
        Poly r;
        for (std::size_t i = c_.size(); i-- > 0;)
            r = r * q + constant(c_[i]);
        return r;
    }

    /// p(a + b t).
    Poly affine_substitute(const T& a, const T& b) const { return compose(Poly{a, b}); }

    /// t^n p(1/t), n = degree.
    Poly reversed() const {
        std::vector<T> c(c_.rbegin(), c_.rend());
        return Poly(std::move(c));
    }

    std::string to_string(const char* var = "x") const {
        if (c_.empty())
            return "0";
        std::string s;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (c_[i] == 0)
                continue;
            T a = c_[i];
            bool neg = a < 0;
            if (neg)
                a = -a;
            if (s.empty())
                s += neg ? "-" : "";
            else
                s += neg ? " - " : " + ";
            std::string mag = a.get_str();
            if (i == 0) {
                s += mag;
            } else {
                if (a != 1)
                    s += mag + "*";
                s += var;
                if (i > 1)
                    s += "^" + std::to_string(i);
            }
        }
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.to_string(); }

private:
    std::vector<T> c_;

    void trim() {
        while (!c_.empty() && c_.back() == 0)
            c_.pop_back();
    }

    static Ball coeff_ball(const Integer& v, prec_t prec) { return Ball::from_integer(v, prec); }
    static Ball coeff_ball(const Rational& v, prec_t prec) { return Ball::from_rational(v, prec); }
};

using IntPoly = Poly<Integer>;
using RatPoly = Poly<Rational>;

inline RatPoly to_rat(const IntPoly& p) {
    std::vector<Rational> c;
    for (const auto& x : p.coeffs())
        c.emplace_back(x);
    return RatPoly(std::move(c));
}

inline Integer content(const IntPoly& p) {
    Integer g = 0;
    for (const auto& x : p.coeffs())
        g = gcd(g, x);
    return g;
}

/// Primitive integer polynomial with positive leading coefficient, proportional to p.
inline IntPoly primitive_part(const RatPoly& p) {
    if (p.is_zero())
        return IntPoly();
    Integer l = 1;
    for (const auto& q : p.coeffs())
        l = lcm(l, q.get_den());
    std::vector<Integer> c;
    for (const auto& q : p.coeffs())
        c.push_back(Integer(q * l));
    IntPoly r(std::move(c));
    Integer g = content(r);
    if (r.lc() < 0)
        g = -g;
    std::vector<Integer> d;
    for (const auto& x : r.coeffs())
        d.push_back(x / g);
    return IntPoly(std::move(d));
}

inline IntPoly primitive_part(const IntPoly& p) { return primitive_part(to_rat(p)); }

/// Euclidean division over Q: a = q b + r with deg r < deg b.
inline std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
    if (b.is_zero())
        throw DivisionByZero("polynomial division by zero");
    std::vector<Rational> r = a.coeffs();
    long db = b.degree();
    if (a.degree() < db)
        return {RatPoly(), a};
    std::vector<Rational> q(static_cast<std::size_t>(a.degree() - db + 1), Rational(0));
    for (long i = a.degree(); i >= db; --i) {
        Rational f = r[static_cast<std::size_t>(i)] / b.lc();
        if (f == 0)
            continue;
        q[static_cast<std::size_t>(i - db)] = f;
        for (long j = 0; j <= db; ++j)
            r[static_cast<std::size_t>(i - db + j)] -= f * b.coeffs()[static_cast<std::size_t>(j)];
    }
    r.resize(static_cast<std::size_t>(db));
    return {RatPoly(std::move(q)), RatPoly(std::move(r))};
}

inline RatPoly operator%(const RatPoly& a, const RatPoly& b) { return divmod(a, b).second; }

/// Monic gcd over Q (zero if both inputs are zero).
inline RatPoly gcd(RatPoly a, RatPoly b) {
    while (!b.is_zero()) {
        RatPoly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero())
        return a;
    Rational inv = 1 / a.lc();
    return inv * a;
}

inline bool is_squarefree(const IntPoly& f) {
    RatPoly g = gcd(to_rat(f), to_rat(f.derivative()));
    return g.degree() <= 0;
}

/// Extended Euclid: returns (g, s) with s a ≡ g (mod b), g monic gcd.
inline std::pair<RatPoly, RatPoly> gcdex_left(const RatPoly& a, const RatPoly& b) {
    RatPoly r0 = a, r1 = b, s0 = RatPoly::constant(1), s1;
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        RatPoly s = s0 - q * s1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    Rational inv = 1 / r0.lc();
    return {inv * r0, inv * s0};
}

} // namespace toral
