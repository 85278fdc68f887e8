#pragma once

#include "toral/arith/numbers.hpp"
#include "toral/error.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace toral {

/// Certified sign of a quantity. `Zero` is only ever produced by exact or
/// structural arguments, never by inspecting a ball.
enum class Sign { Negative, Zero, Positive, Unknown };

inline const char* to_string(Sign s) {
    switch (s) {
    case Sign::Negative: return "Negative";
    case Sign::Zero: return "Zero";
    case Sign::Positive: return "Positive";
    case Sign::Unknown: return "Unknown";
    }
    return "Unknown";
}

/// Midpoint-radius real ball. The represented real x satisfies
/// |x - mid| <= rad; every operation rounds outward.
class Ball {
public:
    static constexpr prec_t kRadPrec = 64;

    explicit Ball(prec_t prec = kDefaultPrecBits) {
        mpfr_init2(mid_, prec);
        mpfr_init2(rad_, kRadPrec);
        mpfr_set_zero(mid_, 1);
        mpfr_set_zero(rad_, 1);
    }
    Ball(const Ball& o) {
        mpfr_init2(mid_, mpfr_get_prec(o.mid_));
        mpfr_init2(rad_, kRadPrec);
        mpfr_set(mid_, o.mid_, MPFR_RNDN);
        mpfr_set(rad_, o.rad_, MPFR_RNDU);
    }
    Ball(Ball&& o) noexcept {
        mpfr_init2(mid_, mpfr_get_prec(o.mid_));
        mpfr_init2(rad_, kRadPrec);
        mpfr_swap(mid_, o.mid_);
        mpfr_swap(rad_, o.rad_);
    }
    Ball& operator=(const Ball& o) {
        if (this != &o) {
            mpfr_set_prec(mid_, mpfr_get_prec(o.mid_));
            mpfr_set(mid_, o.mid_, MPFR_RNDN);
            mpfr_set(rad_, o.rad_, MPFR_RNDU);
        }
        return *this;
    }
    Ball& operator=(Ball&& o) noexcept {
        mpfr_swap(mid_, o.mid_);
        mpfr_swap(rad_, o.rad_);
        return *this;
    }
    ~Ball() {
        mpfr_clear(mid_);
        mpfr_clear(rad_);
    }

    static Ball from_integer(const Integer& v, prec_t prec) {
        Ball b(prec);
        int t = mpfr_set_z(b.mid_, v.get_mpz_t(), MPFR_RNDN);
        b.account_rounding(t);
        return b;
    }
    static Ball from_long(long v, prec_t prec) { return from_integer(Integer(v), prec); }
    static Ball from_rational(const Rational& v, prec_t prec) {
        Ball b(prec);
        int t = mpfr_set_q(b.mid_, v.get_mpq_t(), MPFR_RNDN);
        b.account_rounding(t);
        return b;
    }
    /// Ball with an exactly representable double midpoint and radius >= rad.
    static Ball from_double(double mid, double rad, prec_t prec) {
        Ball b(prec);
        int t = mpfr_set_d(b.mid_, mid, MPFR_RNDN);
        mpfr_set_d(b.rad_, std::fabs(rad), MPFR_RNDU);
        b.account_rounding(t);
        return b;
    }
    /// Parses decimal midpoint and radius strings; the result contains every
    /// real within `rad` of the decimal midpoint.
    static Ball from_strings(const std::string& mid, const std::string& rad, prec_t prec) {
        Ball b(prec);
        char* end = nullptr;
        int t = mpfr_strtofr(b.mid_, mid.c_str(), &end, 10, MPFR_RNDN);
        if (end == mid.c_str() || *end != '\0')
            throw InputError("malformed ball midpoint '" + mid + "'");
        mpfr_strtofr(b.rad_, rad.c_str(), &end, 10, MPFR_RNDU);
        if (end == rad.c_str() || *end != '\0' || mpfr_sgn(b.rad_) < 0 || !mpfr_number_p(b.rad_))
            throw InputError("malformed ball radius '" + rad + "'");
        b.account_rounding(t);
        return b;
    }

    prec_t prec() const { return mpfr_get_prec(mid_); }
    mpfr_srcptr mid() const { return mid_; }
    mpfr_srcptr rad() const { return rad_; }
    double mid_double() const { return mpfr_get_d(mid_, MPFR_RNDN); }
    double rad_double() const { return mpfr_get_d(rad_, MPFR_RNDU); }
    Rational mid_rational() const { return to_rational(mid_); }
    Rational rad_rational() const { return to_rational(rad_); }
    bool is_finite() const { return mpfr_number_p(mid_) && mpfr_number_p(rad_); }
    bool is_exact() const { return mpfr_zero_p(rad_); }

    /// Upper bound for |x| over the ball.
    double mag_upper() const {
        mpfr_t m;
        mpfr_init2(m, kRadPrec);
        mpfr_abs(m, mid_, MPFR_RNDU);
        mpfr_add(m, m, rad_, MPFR_RNDU);
        double r = mpfr_get_d(m, MPFR_RNDU);
        mpfr_clear(m);
        return r;
    }

    bool contains(const Rational& q) const {
        Rational d = q - mid_rational();
        return abs(d) <= rad_rational();
    }
    bool contains(const Ball& o) const {
        Rational d = o.mid_rational() - mid_rational();
        return abs(d) + o.rad_rational() <= rad_rational();
    }
    bool contains_zero() const { return mpfr_cmpabs(mid_, rad_) <= 0; }
    bool overlaps(const Ball& o) const {
        Rational d = o.mid_rational() - mid_rational();
        return abs(d) <= o.rad_rational() + rad_rational();
    }

    /// True when the ball radius is below 2^-bits.
    bool rad_below_pow2(long bits) const {
        if (mpfr_zero_p(rad_))
            return true;
        return mpfr_get_exp(rad_) <= -bits;
    }

    Ball operator-() const {
        Ball r(*this);
        mpfr_neg(r.mid_, r.mid_, MPFR_RNDN);
        return r;
    }

    friend Ball operator+(const Ball& a, const Ball& b) {
        Ball r(std::max(a.prec(), b.prec()));
        int t = mpfr_add(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
        mpfr_add(r.rad_, a.rad_, b.rad_, MPFR_RNDU);
        r.account_rounding(t);
        return r;
    }
    friend Ball operator-(const Ball& a, const Ball& b) {
        Ball r(std::max(a.prec(), b.prec()));
        int t = mpfr_sub(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
        mpfr_add(r.rad_, a.rad_, b.rad_, MPFR_RNDU);
        r.account_rounding(t);
        return r;
    }
    friend Ball operator*(const Ball& a, const Ball& b) {
        Ball r(std::max(a.prec(), b.prec()));
        int t = mpfr_mul(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
        // |a.mid| b.rad + |b.mid| a.rad + a.rad b.rad
        Scratch s;
        mpfr_abs(s.x, a.mid_, MPFR_RNDU);
        mpfr_mul(s.x, s.x, b.rad_, MPFR_RNDU);
        mpfr_abs(s.y, b.mid_, MPFR_RNDU);
        mpfr_mul(s.y, s.y, a.rad_, MPFR_RNDU);
        mpfr_add(s.x, s.x, s.y, MPFR_RNDU);
        mpfr_mul(s.y, a.rad_, b.rad_, MPFR_RNDU);
        mpfr_add(r.rad_, s.x, s.y, MPFR_RNDU);
        r.account_rounding(t);
        return r;
    }
    /// Throws DomainError unless the divisor is certified nonzero.
    friend Ball operator/(const Ball& a, const Ball& b) {
        if (b.contains_zero())
            throw DomainError("division by a ball containing zero");
        Ball r(std::max(a.prec(), b.prec()));
        int t = mpfr_div(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
        // (|a.mid| b.rad + |b.mid| a.rad) / (|b.mid| (|b.mid| - b.rad))
        Scratch s;
        mpfr_abs(s.x, a.mid_, MPFR_RNDU);
        mpfr_mul(s.x, s.x, b.rad_, MPFR_RNDU);
        mpfr_abs(s.y, b.mid_, MPFR_RNDU);
        mpfr_mul(s.y, s.y, a.rad_, MPFR_RNDU);
        mpfr_add(s.x, s.x, s.y, MPFR_RNDU);
        mpfr_abs(s.y, b.mid_, MPFR_RNDD);
        mpfr_sub(s.z, s.y, b.rad_, MPFR_RNDD);
        mpfr_mul(s.y, s.y, s.z, MPFR_RNDD);
        mpfr_div(r.rad_, s.x, s.y, MPFR_RNDU);
        r.account_rounding(t);
        return r;
    }

    Ball& operator+=(const Ball& o) { return *this = *this + o; }
    Ball& operator-=(const Ball& o) { return *this = *this - o; }
    Ball& operator*=(const Ball& o) { return *this = *this * o; }
    Ball& operator/=(const Ball& o) { return *this = *this / o; }

    friend Ball operator*(const Integer& k, const Ball& b) { return from_integer(k, b.prec()) * b; }
    friend Ball operator*(const Rational& k, const Ball& b) { return from_rational(k, b.prec()) * b; }

    /// Widens the radius by a nonnegative amount given as 2^exp.
    void add_error_pow2(long exp) {
        Scratch s;
        mpfr_set_ui_2exp(s.x, 1, exp, MPFR_RNDU);
        mpfr_add(rad_, rad_, s.x, MPFR_RNDU);
    }
    void add_error(const Ball& e) {
        Scratch s;
        mpfr_abs(s.x, e.mid_, MPFR_RNDU);
        mpfr_add(s.x, s.x, e.rad_, MPFR_RNDU);
        mpfr_add(rad_, rad_, s.x, MPFR_RNDU);
    }

    /// Ball containing [lo, hi] for a rational interval.
    static Ball from_interval(const Rational& lo, const Rational& hi, prec_t prec) {
        Ball b = from_rational((lo + hi) / 2, prec);
        Rational half = (hi - lo) / 2;
        Ball w = from_rational(half, kRadPrec);
        b.add_error(w);
        return b;
    }

    friend Ball log(const Ball& x);
    friend Ball exp(const Ball& x);
    friend Ball sqrt(const Ball& x);

    /// Decimal midpoint with enough digits to pin the binary value.
    std::string mid_string() const {
        if (mpfr_zero_p(mid_))
            return "0";
        std::size_t digits = decimal_digits();
        mpfr_exp_t e10 = 0;
        char* s = mpfr_get_str(nullptr, &e10, 10, digits, mid_, MPFR_RNDN);
        std::string out = format_decimal(s, e10);
        mpfr_free_str(s);
        return out;
    }
    /// Decimal radius, rounded up so that parsing `mid_string()` with it
    /// yields a ball containing this one.
    std::string rad_string() const {
        Scratch s;
        mpfr_set(s.x, rad_, MPFR_RNDU);
        if (!mpfr_zero_p(mid_)) {
            std::size_t digits = decimal_digits();
            mpfr_exp_t e10 = 0;
            char* str = mpfr_get_str(nullptr, &e10, 10, digits, mid_, MPFR_RNDN);
            mpfr_free_str(str);
            // half a unit in the last printed decimal place
            long exponent = static_cast<long>(e10) - static_cast<long>(digits);
            mpfr_set_ui(s.y, 10, MPFR_RNDU);
            if (exponent >= 0) {
                mpfr_pow_si(s.y, s.y, exponent, MPFR_RNDU);
            } else {
                mpfr_set_ui(s.z, 10, MPFR_RNDD);
                mpfr_pow_si(s.z, s.z, -exponent, MPFR_RNDD);
                mpfr_ui_div(s.y, 1, s.z, MPFR_RNDU);
            }
            mpfr_div_2ui(s.y, s.y, 1, MPFR_RNDU);
            mpfr_add(s.x, s.x, s.y, MPFR_RNDU);
        }
        if (mpfr_zero_p(s.x))
            return "0";
        mpfr_exp_t e10 = 0;
        char* str = mpfr_get_str(nullptr, &e10, 10, 17, s.x, MPFR_RNDU);
        std::string out = format_decimal(str, e10);
        mpfr_free_str(str);
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, const Ball& b) {
        mpfr_exp_t e10 = 0;
        if (mpfr_zero_p(b.mid_)) {
            os << "0";
        } else {
            char* s = mpfr_get_str(nullptr, &e10, 10, 20, b.mid_, MPFR_RNDN);
            os << format_decimal(s, e10);
            mpfr_free_str(s);
        }
        return os << " +/- " << b.rad_double();
    }

private:
    mpfr_t mid_;
    mpfr_t rad_;

    struct Scratch {
        mpfr_t x, y, z;
        Scratch() {
            mpfr_inits2(kRadPrec, x, y, z, static_cast<mpfr_ptr>(nullptr));
        }
        ~Scratch() { mpfr_clears(x, y, z, static_cast<mpfr_ptr>(nullptr)); }
        Scratch(const Scratch&) = delete;
        Scratch& operator=(const Scratch&) = delete;
    };

    // After rounding mid to nearest, the error is at most |mid| 2^-prec.
    void account_rounding(int ternary) {
        if (ternary == 0)
            return;
        Scratch s;
        mpfr_abs(s.x, mid_, MPFR_RNDU);
        mpfr_div_2si(s.x, s.x, prec(), MPFR_RNDU);
        mpfr_add(rad_, rad_, s.x, MPFR_RNDU);
    }

    std::size_t decimal_digits() const {
        return static_cast<std::size_t>(std::ceil(static_cast<double>(prec()) * 0.30102999566398120)) + 2;
    }

    static std::string format_decimal(const char* digits, mpfr_exp_t e10) {
        std::string d(digits);
        std::string sign;
        if (!d.empty() && d[0] == '-') {
            sign = "-";
            d.erase(0, 1);
        }
        while (d.size() > 1 && d.back() == '0')
            d.pop_back();
        std::string out = sign + d.substr(0, 1);
        if (d.size() > 1)
            out += "." + d.substr(1);
        long e = static_cast<long>(e10) - 1;
        if (e != 0)
            out += "e" + std::to_string(e);
        return out;
    }
};

/// Certified sign: Positive iff mid - rad > 0, Negative iff mid + rad < 0.
inline Sign sign_certified(const Ball& x) {
    if (mpfr_cmpabs(x.mid(), x.rad()) <= 0)
        return Sign::Unknown;
    return mpfr_sgn(x.mid()) > 0 ? Sign::Positive : Sign::Negative;
}

/// Natural logarithm of a ball certified positive.
inline Ball log(const Ball& x) {
    if (sign_certified(x) != Sign::Positive)
        throw DomainError("log of a ball not certified positive");
    Ball r(x.prec());
    int t = mpfr_log(r.mid_, x.mid_, MPFR_RNDN);
    if (!mpfr_zero_p(x.rad_)) {
        // log is concave: |log y - log m| <= rad / (m - rad)
        Ball::Scratch s;
        mpfr_sub(s.x, x.mid_, x.rad_, MPFR_RNDD);
        mpfr_div(r.rad_, x.rad_, s.x, MPFR_RNDU);
    }
    r.account_rounding(t);
    return r;
}

inline Ball exp(const Ball& x) {
    Ball r(x.prec());
    int t = mpfr_exp(r.mid_, x.mid_, MPFR_RNDN);
    if (!mpfr_zero_p(x.rad_)) {
        // |e^y - e^m| <= e^(m + rad) * rad
        Ball::Scratch s;
        mpfr_add(s.x, x.mid_, x.rad_, MPFR_RNDU);
        mpfr_exp(s.x, s.x, MPFR_RNDU);
        mpfr_mul(r.rad_, s.x, x.rad_, MPFR_RNDU);
    }
    r.account_rounding(t);
    return r;
}

inline Ball sqrt(const Ball& x) {
    if (sign_certified(x) != Sign::Positive)
        throw DomainError("sqrt of a ball not certified positive");
    Ball r(x.prec());
    int t = mpfr_sqrt(r.mid_, x.mid_, MPFR_RNDN);
    if (!mpfr_zero_p(x.rad_)) {
        // |sqrt y - sqrt m| <= rad / sqrt(m - rad)
        Ball::Scratch s;
        mpfr_sub(s.x, x.mid_, x.rad_, MPFR_RNDD);
        mpfr_sqrt(s.x, s.x, MPFR_RNDD);
        mpfr_div(r.rad_, x.rad_, s.x, MPFR_RNDU);
    }
    r.account_rounding(t);
    return r;
}

inline Ball abs(const Ball& x) { return mpfr_sgn(x.mid()) < 0 ? -x : x; }

inline Ball pow(const Ball& x, unsigned long n) {
    Ball result = Ball::from_long(1, x.prec());
    Ball base = x;
    while (n) {
        if (n & 1UL)
            result *= base;
        n >>= 1;
        if (n)
            base *= base;
    }
    return result;
}

/// log of a positive rational, evaluated at `prec` bits.
inline Ball log_rational(const Rational& q, prec_t prec) {
    if (q <= 0)
        throw DomainError("log of a nonpositive rational");
    return log(Ball::from_rational(q, prec + 8));
}

using BallVector = std::vector<Ball>;
using BallMatrix = std::vector<BallVector>;

inline BallVector to_balls(const RatVector& v, prec_t prec) {
    BallVector out;
    out.reserve(v.size());
    for (const auto& q : v)
        out.push_back(Ball::from_rational(q, prec));
    return out;
}

inline Ball dot(const BallVector& a, const BallVector& b) {
    prec_t p = a.empty() ? kDefaultPrecBits : a.front().prec();
    Ball s(p);
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
        s += a[i] * b[i];
    return s;
}

} // namespace toral
