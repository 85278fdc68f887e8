#pragma once

#include "toral/arith/complex_ball.hpp"
#include "toral/arith/poly.hpp"
#include "toral/arith/roots.hpp"
#include "toral/error.hpp"
#include "toral/field/irreducible.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace toral {

class NumberField;
class FieldElement;
using Field = std::shared_ptr<const NumberField>;

/// Q[t]/(f) for an irreducible primitive integer polynomial f.
///
/// Embeddings are numbered: real roots in ascending order, then for each
/// complex root in the upper half plane (ordered by real part) the root
/// followed by its conjugate.
class NumberField : public std::enable_shared_from_this<NumberField> {
public:
    struct Private {};
    NumberField(Private, IntPoly f, std::vector<RootInterval> real, std::size_t r2)
        : f_(std::move(f)), real_(std::move(real)), r2_(r2) {}

    const IntPoly& min_poly() const { return f_; }
    std::size_t degree() const { return static_cast<std::size_t>(f_.degree()); }
    std::size_t r1() const { return real_.size(); }
    std::size_t r2() const { return r2_; }
    bool totally_real() const { return r2_ == 0; }
    const std::vector<RootInterval>& real_intervals() const { return real_; }

    /// Certified enclosures of all d roots, ordered as the embeddings.
    std::vector<ComplexBall> roots(prec_t prec) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = roots_.find(prec);
        if (it != roots_.end())
            return it->second;
        std::vector<ComplexBall> out;
        prec_t wp = prec + 32;
        for (const auto& iv : real_)
            out.push_back(ComplexBall{real_root_ball(f_, iv, wp), Ball::from_long(0, wp)});
        if (r2_ > 0) {
            CertifiedRoots cr = certified_complex_roots(f_, wp);
            for (const auto& z : cr.upper) {
                out.push_back(z);
                out.push_back(z.conj());
            }
        }
        roots_.emplace(prec, out);
        return out;
    }

    bool is_real_embedding(std::size_t j) const { return j < real_.size(); }

    std::string to_string() const { return f_.to_string("t"); }

    // Galois data, filled lazily by galois.hpp.
    struct GaloisData {
        std::vector<RatVector> images; ///< images[j] = sigma_j(t), sigma_j maps root 0 to root j
        std::vector<std::vector<std::size_t>> compose; ///< compose[k][j] = index of sigma_k o sigma_j
    };
    std::optional<GaloisData> galois_cache() const {
        std::lock_guard<std::mutex> lock(mu_);
        return galois_;
    }
    void set_galois_cache(GaloisData g) const {
        std::lock_guard<std::mutex> lock(mu_);
        galois_ = std::move(g);
    }
    bool galois_failed() const {
        std::lock_guard<std::mutex> lock(mu_);
        return not_galois_;
    }
    void set_galois_failed() const {
        std::lock_guard<std::mutex> lock(mu_);
        not_galois_ = true;
    }

private:
    IntPoly f_;
    std::vector<RootInterval> real_;
    std::size_t r2_ = 0;
    mutable std::mutex mu_;
    mutable std::map<prec_t, std::vector<ComplexBall>> roots_;
    mutable std::optional<GaloisData> galois_;
    mutable bool not_galois_ = false;
};

inline Field make_field(const IntPoly& f) {
    if (f.degree() < 1)
        throw InputError("make_field: polynomial must be nonconstant");
    if (content(f) != 1)
        throw InputError("make_field: polynomial must have content 1");
    IntPoly g = f.lc() < 0 ? -f : f;
    IrreducibilityReport rep = check_irreducible(g);
    if (rep.verdict == Irreducibility::Reducible)
        throw ReducibleError("make_field: " + g.to_string("t") + " has the factor " + rep.factor->to_string("t"));
    if (rep.verdict == Irreducibility::Unknown)
        throw InputError("make_field: irreducibility of " + g.to_string("t") + " could not be certified");
    auto real = isolate_real_roots(g);
    std::size_t d = static_cast<std::size_t>(g.degree());
    return std::make_shared<const NumberField>(NumberField::Private{}, g, real, (d - real.size()) / 2);
}

/// Element of a number field in the power basis 1, t, ..., t^(d-1).
class FieldElement {
public:
    FieldElement() = default;
    FieldElement(Field k, RatVector c) : k_(std::move(k)), c_(std::move(c)) {
        if (!k_)
            throw InputError("FieldElement: null field");
        for (auto& q : c_)
            q.canonicalize();
        if (c_.size() > k_->degree())
            c_ = reduce(RatPoly(c_)).c_;
        c_.resize(k_->degree(), Rational(0));
    }
    static FieldElement from_rational(const Field& k, const Rational& q) {
        RatVector c(k->degree(), Rational(0));
        c[0] = q;
        return FieldElement(k, c);
    }
    static FieldElement generator(const Field& k) {
        RatVector c(k->degree(), Rational(0));
        if (k->degree() == 1)
            c[0] = make_rational(Integer(-k->min_poly().coeff(0)), k->min_poly().coeff(1));
        else
            c[1] = 1;
        return FieldElement(k, c);
    }
    static FieldElement from_poly(const Field& k, const RatPoly& p) {
        FieldElement z = from_rational(k, 0);
        return z.reduce(p);
    }

    const Field& field() const { return k_; }
    const RatVector& coeffs() const { return c_; }
    std::size_t degree() const { return c_.size(); }
    RatPoly poly() const { return RatPoly(c_); }

    bool is_zero() const {
        for (const auto& q : c_)
            if (q != 0)
                return false;
        return true;
    }
    bool is_rational() const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0)
                return false;
        return true;
    }
    bool is_one() const { return is_rational() && c_[0] == 1; }
    bool is_minus_one() const { return is_rational() && c_[0] == -1; }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        same(a, b);
        RatVector c = a.c_;
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] += b.c_[i];
        return FieldElement(a.k_, std::move(c));
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
        same(a, b);
        RatVector c = a.c_;
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] -= b.c_[i];
        return FieldElement(a.k_, std::move(c));
    }
    FieldElement operator-() const {
        RatVector c = c_;
        for (auto& q : c)
            q = -q;
        return FieldElement(k_, std::move(c));
    }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        same(a, b);
        return a.reduce(a.poly() * b.poly());
    }
    friend FieldElement operator*(const Rational& q, const FieldElement& a) {
        RatVector c = a.c_;
        for (auto& x : c)
            x *= q;
        return FieldElement(a.k_, std::move(c));
    }
    FieldElement inverse() const {
        if (is_zero())
            throw DivisionByZero("FieldElement: inverse of zero");
        auto [g, s] = gcdex_left(poly(), to_rat(k_->min_poly()));
        if (g.degree() != 0)
            throw InternalError("FieldElement: minimal polynomial not irreducible");
        return reduce(s);
    }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }

    FieldElement pow(const Integer& e) const {
        if (e < 0)
            return inverse().pow(-e);
        FieldElement r = from_rational(k_, 1), b = *this;
        Integer n = e;
        while (n > 0) {
            if (mpz_odd_p(n.get_mpz_t()))
                r = r * b;
            n >>= 1;
            if (n > 0)
                b = b * b;
        }
        return r;
    }

    friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.k_ == b.k_ && a.c_ == b.c_; }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

    /// Substitute t -> y (an element of the same field).
    FieldElement substitute(const FieldElement& y) const {
        FieldElement r = from_rational(k_, 0);
        for (std::size_t i = c_.size(); i-- > 0;)
            r = r * y + from_rational(k_, c_[i]);
        return r;
    }

    std::string to_string(const char* var = "t") const { return poly().to_string(var); }

private:
    static void same(const FieldElement& a, const FieldElement& b) {
        if (a.k_ != b.k_ && !(a.k_ && b.k_ && a.k_->min_poly() == b.k_->min_poly()))
            throw InputError("FieldElement: operands live in different fields");
    }
    FieldElement reduce(const RatPoly& p) const {
        RatPoly r = p % to_rat(k_->min_poly());
        RatVector c = r.coeffs();
        c.resize(k_->degree(), Rational(0));
        FieldElement out;
        out.k_ = k_;
        out.c_ = std::move(c);
        return out;
    }

    Field k_;
    RatVector c_;
};

/// Value of x under embedding j.
inline ComplexBall embed(const FieldElement& x, std::size_t j, prec_t prec) {
    const Field& k = x.field();
    if (j >= k->degree())
        throw InputError("embed: embedding index out of range");
    ComplexBall z = k->roots(prec)[j];
    prec_t wp = z.prec();
    ComplexBall acc(wp);
    const auto& c = x.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) {
        acc = acc * z;
        acc.re = acc.re + Ball::from_rational(c[i], wp);
    }
    if (k->is_real_embedding(j))
        acc.im = Ball::from_long(0, wp);
    return acc;
}

/// Real embedding value; InputError for a complex embedding.
inline Ball embed_real(const FieldElement& x, std::size_t j, prec_t prec) {
    if (!x.field()->is_real_embedding(j))
        throw InputError("embed_real: embedding is complex");
    return embed(x, j, prec).re;
}

/// log |x| under embedding j; DomainError if the value cannot be separated from 0.
inline Ball log_abs_embed(const FieldElement& x, std::size_t j, prec_t prec) {
    if (x.is_zero())
        throw DomainError("log_abs_embed: zero element");
    ComplexBall z = embed(x, j, prec);
    if (x.field()->is_real_embedding(j))
        return log(abs(z.re));
    return log_abs(z);
}

/// Matrix of multiplication by x on the power basis (column k = x t^k).
inline std::vector<RatVector> multiplication_matrix(const FieldElement& x) {
    std::size_t d = x.degree();
    std::vector<RatVector> m(d, RatVector(d));
    FieldElement b = FieldElement::from_rational(x.field(), 1);
    FieldElement t = FieldElement::generator(x.field());
    for (std::size_t k = 0; k < d; ++k) {
        FieldElement col = x * b;
        for (std::size_t i = 0; i < d; ++i)
            m[i][k] = col.coeffs()[i];
        b = b * t;
    }
    return m;
}

/// Characteristic polynomial of multiplication by x (Faddeev-LeVerrier), monic.
inline RatPoly charpoly(const FieldElement& x) {
    auto a = multiplication_matrix(x);
    std::size_t n = a.size();
    std::vector<Rational> c(n + 1, Rational(0));
    c[n] = 1;
    std::vector<RatVector> m(n, RatVector(n, Rational(0)));
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{n-k+1} I
        std::vector<RatVector> am(n, RatVector(n, Rational(0)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                if (a[i][l] == 0)
                    continue;
                for (std::size_t j = 0; j < n; ++j)
                    am[i][j] += a[i][l] * m[l][j];
            }
        for (std::size_t i = 0; i < n; ++i)
            am[i][i] += c[n - k + 1];
        m = std::move(am);
        Rational tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                tr += a[i][l] * m[l][i];
        c[n - k] = -tr / Rational(static_cast<long>(k));
    }
    return RatPoly(c);
}

inline Rational norm(const FieldElement& x) {
    RatPoly cp = charpoly(x);
    Rational c0 = cp.coeff(0);
    return x.degree() % 2 == 0 ? c0 : -c0;
}

inline Rational trace(const FieldElement& x) {
    return -charpoly(x).coeff(x.degree() - 1);
}

inline bool is_algebraic_integer(const FieldElement& x) {
    RatPoly cp = charpoly(x);
    for (const auto& q : cp.coeffs())
        if (q.get_den() != 1)
            return false;
    return true;
}

inline bool is_unit(const FieldElement& x) {
    if (!is_algebraic_integer(x))
        return false;
    Rational n = norm(x);
    return n == 1 || n == -1;
}

/// Monic minimal polynomial over Q, from the first linear dependence among powers.
inline RatPoly minimal_polynomial(const FieldElement& x) {
    std::size_t d = x.degree();
    std::vector<RatVector> rows; // echelon rows with combination coefficients
    std::vector<RatVector> combos;
    std::vector<std::size_t> pivcol;
    FieldElement p = FieldElement::from_rational(x.field(), 1);
    for (std::size_t k = 0; k <= d; ++k) {
        RatVector v = p.coeffs();
        RatVector comb(d + 1, Rational(0));
        comb[k] = 1;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            Rational f = v[pivcol[r]];
            if (f == 0)
                continue;
            for (std::size_t i = 0; i < d; ++i)
                v[i] -= f * rows[r][i];
            for (std::size_t i = 0; i <= d; ++i)
                comb[i] -= f * combos[r][i];
        }
        std::size_t pc = d;
        for (std::size_t i = 0; i < d; ++i)
            if (v[i] != 0) {
                pc = i;
                break;
            }
        if (pc == d) {
            comb.resize(k + 1);
            RatPoly m(comb);
            return (1 / m.lc()) * m;
        }
        Rational piv = v[pc];
        for (auto& q : v)
            q /= piv;
        for (auto& q : comb)
            q /= piv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            Rational f = rows[r][pc];
            if (f == 0)
                continue;
            for (std::size_t i = 0; i < d; ++i)
                rows[r][i] -= f * v[i];
            for (std::size_t i = 0; i <= d; ++i)
                combos[r][i] -= f * comb[i];
        }
        rows.push_back(v);
        combos.push_back(comb);
        pivcol.push_back(pc);
        p = p * x;
    }
    throw InternalError("minimal_polynomial: no dependence among d+1 powers");
}

/// True iff x generates the field, i.e. its minimal polynomial has degree d.
inline bool generates_field(const FieldElement& x) {
    return static_cast<std::size_t>(minimal_polynomial(x).degree()) == x.degree();
}

} // namespace toral
