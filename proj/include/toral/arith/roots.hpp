#pragma once

#include "toral/arith/ball.hpp"
#include "toral/arith/complex_ball.hpp"
#include "toral/arith/poly.hpp"
#include "toral/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace toral {

/// Isolating interval of a real root. When lo == hi the root is that rational
/// exactly; otherwise the root lies strictly inside (lo, hi) and f changes sign
/// across the interval.
struct RootInterval {
    Rational lo;
    Rational hi;

    bool is_exact() const { return lo == hi; }
};

namespace detail {

inline int sign_of(const Integer& x) { return sgn(x); }
inline int sign_of(const Rational& x) { return sgn(x); }

inline long sign_variations(const IntPoly& p) {
    long v = 0;
    int last = 0;
    for (const auto& c : p.coeffs()) {
        int s = sgn(c);
        if (s == 0)
            continue;
        if (last != 0 && s != last)
            ++v;
        last = s;
    }
    return v;
}

/// Descartes bound for the number of roots of f in the open interval (a, b).
inline long descartes_bound(const IntPoly& f, const Rational& a, const Rational& b) {
    RatPoly q = to_rat(f).affine_substitute(a, b - a);
    IntPoly r = primitive_part(q).reversed();
    IntPoly shifted = r.compose(IntPoly{Integer(1), Integer(1)});
    return sign_variations(shifted);
}

inline int sign_at(const IntPoly& f, const Rational& x) { return sgn(f.eval(x)); }

/// 2^k with 2^k strictly above every root modulus (Cauchy bound).
inline Rational root_bound(const IntPoly& f) {
    Rational m = 0;
    for (long i = 0; i < f.degree(); ++i) {
        Rational q(abs(f.coeffs()[static_cast<std::size_t>(i)]), abs(f.lc()));
        if (q > m)
            m = q;
    }
    Rational b = 1 + m;
    Rational p = 1;
    while (p <= b)
        p *= 2;
    return p;
}

} // namespace detail

/// Disjoint isolating intervals, one per real root, sorted ascending.
/// f must be nonzero and squarefree.
inline std::vector<RootInterval> isolate_real_roots(const IntPoly& f) {
    if (f.is_zero())
        throw InputError("isolate_real_roots: zero polynomial");
    if (!is_squarefree(f))
        throw InputError("isolate_real_roots: polynomial is not squarefree");
    std::vector<RootInterval> out;
    if (f.degree() <= 0)
        return out;
    Rational bound = detail::root_bound(f);
    std::vector<RootInterval> work{{-bound, bound}};
    while (!work.empty()) {
        RootInterval iv = work.back();
        work.pop_back();
        long v = detail::descartes_bound(f, iv.lo, iv.hi);
        if (v == 0)
            continue;
        if (v == 1) {
            out.push_back(iv);
            continue;
        }
        Rational mid = (iv.lo + iv.hi) / 2;
        if (detail::sign_at(f, mid) == 0) {
            out.push_back({mid, mid});
            // split slightly off the root so interval endpoints are never roots
            Rational step = (iv.hi - iv.lo) / 8;
            Rational left = mid - step, right = mid + step;
            while (detail::sign_at(f, left) == 0 || detail::sign_at(f, right) == 0 ||
                   detail::descartes_bound(f, left, right) != 1 || false) {
                step /= 2;
                left = mid - step;
                right = mid + step;
            }
            work.push_back({iv.lo, left});
            work.push_back({right, iv.hi});
            continue;
        }
        work.push_back({iv.lo, mid});
        work.push_back({mid, iv.hi});
    }
    std::sort(out.begin(), out.end(), [](const RootInterval& a, const RootInterval& b) { return a.lo < b.lo; });
    return out;
}

/// Bisects an isolating interval until its width is at most `width`.
inline RootInterval refine_interval(const IntPoly& f, RootInterval iv, const Rational& width) {
    if (iv.is_exact())
        return iv;
    int slo = detail::sign_at(f, iv.lo);
    while (iv.hi - iv.lo > width) {
        Rational mid = (iv.lo + iv.hi) / 2;
        int s = detail::sign_at(f, mid);
        if (s == 0)
            return {mid, mid};
        if (s == slo)
            iv.lo = mid;
        else
            iv.hi = mid;
    }
    return iv;
}

/// Ball of radius about 2^-prec (relative for large roots) around the root
/// isolated by `iv`, certified by an exact sign change.
inline Ball real_root_ball(const IntPoly& f, const RootInterval& iv0, prec_t prec) {
    if (iv0.is_exact())
        return Ball::from_rational(iv0.lo, prec);
    RootInterval iv = refine_interval(f, iv0, Rational(1, 1) / Rational(Integer(1) << 64));
    if (iv.is_exact())
        return Ball::from_rational(iv.lo, prec);
    IntPoly df = f.derivative();
    prec_t wp = prec + 32;
    for (int attempt = 0; attempt < 4; ++attempt) {
        Ball x = Ball::from_rational((iv.lo + iv.hi) / 2, wp);
        for (prec_t bits = 48; bits < 2 * wp; bits *= 2) {
            Ball fx = f.eval_ball(x), dfx = df.eval_ball(x);
            if (dfx.contains_zero())
                break;
            Ball step = fx / dfx;
            x = Ball::from_rational(x.mid_rational() - step.mid_rational(), wp);
        }
        Rational m = x.mid_rational();
        long ex = mpfr_zero_p(x.mid()) ? 0 : std::max<long>(0, mpfr_get_exp(x.mid()));
        Rational eps = Rational(Integer(1) << static_cast<unsigned long>(std::max<long>(0, ex)), 1) /
                       Rational(Integer(1) << static_cast<unsigned long>(prec + 4), 1);
        Rational lo = m - eps, hi = m + eps;
        if (lo > iv.lo && hi < iv.hi) {
            int sl = detail::sign_at(f, lo), sh = detail::sign_at(f, hi);
            if (sl == 0)
                return Ball::from_rational(lo, prec);
            if (sh == 0)
                return Ball::from_rational(hi, prec);
            if (sl != sh)
                return Ball::from_interval(lo, hi, prec);
        }
        iv = refine_interval(f, iv, (iv.hi - iv.lo) / Rational(Integer(1) << 64));
        if (iv.is_exact())
            return Ball::from_rational(iv.lo, prec);
        wp *= 2;
    }
    Rational w = Rational(1) / Rational(Integer(1) << static_cast<unsigned long>(prec));
    iv = refine_interval(f, iv, w);
    return iv.is_exact() ? Ball::from_rational(iv.lo, prec) : Ball::from_interval(iv.lo, iv.hi, prec);
}

namespace detail {

/// Aberth-Ehrlich iteration in long double; approximations only.
inline std::vector<std::complex<long double>> approximate_roots(const IntPoly& f) {
    using C = std::complex<long double>;
    std::size_t n = static_cast<std::size_t>(f.degree());
    std::vector<long double> a(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        a[i] = f.coeffs()[i].get_d() / f.lc().get_d();
    long double bound = root_bound(f).get_d();
    std::vector<C> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        long double ang = 2.0L * 3.14159265358979323846L * (static_cast<long double>(k) + 0.4L) / static_cast<long double>(n);
        z[k] = C(0.5L * bound * std::cos(ang), 0.5L * bound * std::sin(ang));
    }
    auto eval = [&](const C& x, C& px, C& dpx) {
        px = C(0);
        dpx = C(0);
        for (std::size_t i = n + 1; i-- > 0;) {
            dpx = dpx * x + px;
            px = px * x + C(a[i]);
        }
    };
    for (int it = 0; it < 1000; ++it) {
        long double maxstep = 0;
        for (std::size_t k = 0; k < n; ++k) {
            C px, dpx;
            eval(z[k], px, dpx);
            if (std::abs(px) == 0)
                continue;
            C ratio = px / dpx;
            C s(0);
            for (std::size_t j = 0; j < n; ++j)
                if (j != k)
                    s += C(1) / (z[k] - z[j]);
            C w = ratio / (C(1) - ratio * s);
            z[k] -= w;
            maxstep = std::max(maxstep, std::abs(w) / std::max<long double>(1, std::abs(z[k])));
        }
        if (maxstep < 1e-17L)
            break;
    }
    return z;
}

inline ComplexBall exact_point(const Rational& re, const Rational& im, prec_t prec) {
    return {Ball::from_rational(re, prec), Ball::from_rational(im, prec)};
}

inline ComplexBall eval_complex(const IntPoly& f, const ComplexBall& z) {
    ComplexBall r(z.prec());
    for (std::size_t i = f.coeffs().size(); i-- > 0;)
        r = r * z + ComplexBall(Ball::from_integer(f.coeffs()[i], z.prec()), Ball(z.prec()));
    return r;
}

inline Rational upper(const Ball& b) { return b.mid_rational() + b.rad_rational(); }
inline Rational lower(const Ball& b) { return b.mid_rational() - b.rad_rational(); }

inline Rational sqrt_upper(const Rational& q) {
    mpfr_t x;
    mpfr_init2(x, 64);
    mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDU);
    mpfr_sqrt(x, x, MPFR_RNDU);
    Rational r = to_rational(x);
    mpfr_clear(x);
    return r;
}

} // namespace detail

/// All complex roots of a squarefree f, each enclosed in a certified box
/// containing exactly one root. Non-real roots come first as conjugate pairs
/// (upper half-plane member first, sorted by real part), then the real roots
/// sorted ascending.
struct CertifiedRoots {
    std::vector<ComplexBall> real;
    std::vector<ComplexBall> upper;
};

inline CertifiedRoots certified_complex_roots(const IntPoly& f, prec_t prec) {
    if (!is_squarefree(f))
        throw InputError("certified_complex_roots: polynomial is not squarefree");
    std::size_t n = static_cast<std::size_t>(f.degree());
    std::size_t r1 = isolate_real_roots(f).size();
    auto approx = detail::approximate_roots(f);
    prec_t wp = prec + 32;
    for (int attempt = 0; attempt < 6; ++attempt, wp *= 2) {
        IntPoly df = f.derivative();
        std::vector<Rational> re(n), im(n);
        for (std::size_t k = 0; k < n; ++k) {
            ComplexBall z{Ball::from_double(static_cast<double>(approx[k].real()), 0, wp),
                          Ball::from_double(static_cast<double>(approx[k].imag()), 0, wp)};
            for (prec_t bits = 32; bits < 2 * wp; bits *= 2) {
                ComplexBall fz = detail::eval_complex(f, z), dz = detail::eval_complex(df, z);
                if (dz.norm2().contains_zero())
                    break;
                ComplexBall step = fz / dz;
                z = detail::exact_point(z.re.mid_rational() - step.re.mid_rational(),
                                        z.im.mid_rational() - step.im.mid_rational(), wp);
            }
            re[k] = z.re.mid_rational();
            im[k] = z.im.mid_rational();
        }
        // Smith's inclusion disks |z - z_k| <= n |W_k|.
        std::vector<Rational> rsq(n);
        bool ok = true;
        for (std::size_t k = 0; k < n && ok; ++k) {
            ComplexBall zk = detail::exact_point(re[k], im[k], wp);
            Ball num = detail::eval_complex(f, zk).norm2();
            Ball den = Ball::from_integer(f.lc() * f.lc(), wp);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == k)
                    continue;
                Ball d = (zk - detail::exact_point(re[j], im[j], wp)).norm2();
                if (d.contains_zero()) {
                    ok = false;
                    break;
                }
                den *= d;
            }
            if (!ok)
                break;
            Ball r = Ball::from_long(static_cast<long>(n * n), wp) * num / den;
            rsq[k] = detail::upper(r);
        }
        if (!ok)
            continue;
        for (std::size_t k = 0; k < n && ok; ++k)
            for (std::size_t j = k + 1; j < n && ok; ++j) {
                Rational d2 = (re[k] - re[j]) * (re[k] - re[j]) + (im[k] - im[j]) * (im[k] - im[j]);
                if (!(d2 > 2 * (rsq[k] + rsq[j])))
                    ok = false;
            }
        if (!ok)
            continue;
        CertifiedRoots out;
        std::size_t nonreal = 0;
        for (std::size_t k = 0; k < n; ++k) {
            Rational radius = detail::sqrt_upper(rsq[k]);
            ComplexBall box{Ball::from_rational(re[k], prec), Ball::from_rational(im[k], prec)};
            box.re.add_error(Ball::from_rational(radius, Ball::kRadPrec));
            box.im.add_error(Ball::from_rational(radius, Ball::kRadPrec));
            if (im[k] * im[k] > rsq[k]) {
                ++nonreal;
                if (im[k] > 0)
                    out.upper.push_back(box);
            } else {
                out.real.push_back(box);
            }
        }
        if (nonreal != n - r1 || out.upper.size() * 2 != nonreal)
            continue;
        auto by_re = [](const ComplexBall& a, const ComplexBall& b) { return a.re.mid_rational() < b.re.mid_rational(); };
        std::sort(out.real.begin(), out.real.end(), by_re);
        std::sort(out.upper.begin(), out.upper.end(), by_re);
        return out;
    }
    throw PrecisionExhausted("complex root certification failed");
}

} // namespace toral
