#pragma once

#include "toral/arith/ball.hpp"

namespace toral {

/// Rectangular complex ball: independent real balls for the two parts.
struct ComplexBall {
    Ball re;
    Ball im;

    ComplexBall() = default;
    explicit ComplexBall(prec_t prec) : re(prec), im(prec) {}
    ComplexBall(Ball r, Ball i) : re(std::move(r)), im(std::move(i)) {}

    prec_t prec() const { return re.prec(); }

    friend ComplexBall operator+(const ComplexBall& a, const ComplexBall& b) { return {a.re + b.re, a.im + b.im}; }
    friend ComplexBall operator-(const ComplexBall& a, const ComplexBall& b) { return {a.re - b.re, a.im - b.im}; }
    friend ComplexBall operator*(const ComplexBall& a, const ComplexBall& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ComplexBall operator*(const Ball& k, const ComplexBall& a) { return {k * a.re, k * a.im}; }
    ComplexBall operator-() const { return {-re, -im}; }
    ComplexBall conj() const { return {re, -im}; }

    /// |z|^2 as a real ball.
    Ball norm2() const { return re * re + im * im; }

    friend ComplexBall operator/(const ComplexBall& a, const ComplexBall& b) {
        Ball d = b.norm2();
        ComplexBall n = a * b.conj();
        return {n.re / d, n.im / d};
    }

    /// Upper bound on |z| for every z in the box.
    double abs_upper() const {
        double r = re.mag_upper(), i = im.mag_upper();
        return std::nextafter(std::sqrt(r * r + i * i) * (1 + 1e-15), HUGE_VAL);
    }
};

/// log |z| for z certified away from zero.
inline Ball log_abs(const ComplexBall& z) {
    Ball half = Ball::from_rational(Rational(1, 2), z.prec());
    return half * log(z.norm2());
}

} // namespace toral
