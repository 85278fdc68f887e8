#pragma once

#include "toral/arith/ball_matrix.hpp"
#include "toral/density/density.hpp"
#include "toral/relations/relations.hpp"
#include "toral/torus/torus.hpp"
#include "toral/units/units.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace toral {

/// One certified step of a scenario. `certification` is the status of the
/// verdict: VerifiedExact, NumericOnly, Certified (ball sign) or Structural.
struct ScenarioStep {
    std::string operation;
    std::string verdict;
    std::string certification;
    std::optional<Ball> value;
    std::vector<IntVector> vectors; ///< relations or characters backing the verdict
};

struct ScenarioReport {
    std::string name;
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<ScenarioStep> steps;
    std::vector<std::string> conclusion;
    bool expected = true; ///< every expected conclusion was reached
    Integer height = kDefaultHeightBound;
    prec_t precision = kDefaultPrecBits;
};

namespace detail {

inline ScenarioStep relation_step(const std::string& op, const RelationResult& r, const std::string& none,
                                  const std::string& some) {
    ScenarioStep s;
    s.operation = op;
    s.verdict = r.relations.empty() ? none : some;
    s.certification = to_string(r.status);
    s.vectors = r.relations;
    return s;
}

inline std::string vec_string(const IntVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + v[i].get_str();
    return s + ")";
}

inline Rational rational_pow(const Rational& a, const Integer& e) {
    Integer k = e < 0 ? Integer(-e) : e;
    Rational r = 1;
    mpz_pow_ui(r.get_num_mpz_t(), a.get_num_mpz_t(), k.get_ui());
    mpz_pow_ui(r.get_den_mpz_t(), a.get_den_mpz_t(), k.get_ui());
    r.canonicalize();
    return e < 0 ? Rational(1) / r : r;
}

/// Positive rational a -> log a as a ball.
inline Ball log_q(const Rational& a, prec_t p) { return log_rational(a, p); }

} // namespace detail

struct CounterexampleReport : ScenarioReport {
    bool skew_det_zero = false;
    Ball det2;
    Sign det2_sign = Sign::Unknown;
    ClosureReport closure;
    std::size_t coordinate_rank = 0;
};

/// The split-torus counterexample: Gamma = <x, y, z> in (R_{>0})^3 with
/// x = (1,2,3), y = (1/2,1,5), z = (7,1,2), and the closure of w = (3,5,1).
inline CounterexampleReport run_counterexample(const RelationOptions& opt = {}) {
    CounterexampleReport rep;
    rep.name = "counterexample";
    rep.height = opt.height;
    rep.precision = opt.prec;
    rep.inputs = {{"x", "(1,2,3)"}, {"y", "(1/2,1,5)"}, {"z", "(7,1,2)"}, {"w", "(3,5,1)"}};
    const prec_t p = opt.prec;
    auto L = [&](long a, prec_t q) { return detail::log_q(Rational(a), q); };
    auto zero = [&](prec_t q) { return Ball::from_long(0, q); };

    // (1) skew matrix of logs: determinant zero by structure, rows and columns Q-independent
    auto skew = [&](prec_t q) {
        return BallMatrix{{zero(q), L(2, q), L(3, q)}, {-L(2, q), zero(q), L(5, q)}, {-L(3, q), -L(5, q), zero(q)}};
    };
    rep.skew_det_zero = det_exact_zero_by_skew(skew(p), true);
    rep.steps.push_back({"skew determinant", "zero", "Structural", std::nullopt, {}});
    RelationResult rows = find_vector_relations(skew, opt);
    rep.steps.push_back(detail::relation_step("skew rows Q-independence", rows, "independent", "dependent"));
    RelationResult cols = find_vector_relations([&](prec_t q) { return transpose(skew(q)); }, opt);
    rep.steps.push_back(detail::relation_step("skew columns Q-independence", cols, "independent", "dependent"));

    // (2) the lattice matrix has nonzero determinant
    auto second = [&](prec_t q) {
        return BallMatrix{{zero(q), L(2, q), L(3, q)}, {-L(2, q), zero(q), L(5, q)}, {L(7, q), zero(q), L(2, q)}};
    };
    rep.det2 = ball_det(second(p));
    rep.det2_sign = sign_certified(rep.det2);
    rep.steps.push_back({"lattice determinant", to_string(rep.det2_sign), "Certified", rep.det2, {}});

    // (3) closure of w
    auto q1 = make_field(IntPoly(std::vector<Integer>{0, 1}));
    auto c = [&](long a, long b = 1) { return FieldElement::from_rational(q1, make_rational(a, b)); };
    LogLattice gamma = make_log_lattice({{c(1), c(2), c(3)}, {c(1, 2), c(1), c(5)}, {c(7), c(1), c(2)}},
                                        Maximality::Unverified);
    TorusPoint w{c(3), c(5), c(1)};
    rep.closure = closure(gamma, {w}, opt);
    {
        ScenarioStep s{"closure of w", "dim " + std::to_string(rep.closure.dim), to_string(rep.closure.status),
                       std::nullopt, rep.closure.kernel_chars.row_list()};
        rep.steps.push_back(s);
    }
    // (4) algebraicity in split coordinates
    closure_is_algebraic_split(rep.closure, gamma, opt);
    rep.steps.push_back({"closure algebraicity", to_string(rep.closure.algebraic), to_string(rep.closure.status),
                         std::nullopt, rep.closure.subtorus_chars.row_list()});

    // (5) coordinates of w generate a rank-2 group: w lies in the subtorus x3 = 1
    RelationOptions o = opt;
    o.verifier = [](const IntVector& e) {
        Rational prod = detail::rational_pow(Rational(3), e[0]) * detail::rational_pow(Rational(5), e[1]) *
                        detail::rational_pow(Rational(1), e[2]);
        return prod == 1 ? Verdict::Verified : Verdict::Refuted;
    };
    RelationResult wrel = find_integer_relations([&](prec_t q) { return BallVector{L(3, q), L(5, q), L(1, q)}; }, o);
    rep.coordinate_rank = 3 - wrel.relations.size();
    rep.steps.push_back(detail::relation_step("coordinate group of w", wrel, "rank 3",
                                              "rank " + std::to_string(rep.coordinate_rank)));

    rep.expected = rep.skew_det_zero && rows.relations.empty() && cols.relations.empty() &&
                   rep.det2_sign == Sign::Positive && rep.closure.dim == 2 &&
                   rep.closure.algebraic == Algebraicity::NotAlgebraic && rep.coordinate_rank == 2;
    rep.conclusion.push_back("Gamma = <x,y,z> is discrete and cocompact in (R_{>0})^3 (lattice determinant " +
                             std::string(to_string(rep.det2_sign)) + ")");
    rep.conclusion.push_back("closure of <w> has dimension " + std::to_string(rep.closure.dim));
    rep.conclusion.push_back(std::string("closure is ") + to_string(rep.closure.algebraic) + " (" +
                             to_string(rep.closure.status) + ", H = " + opt.height.get_str() + ")");
    rep.conclusion.push_back("w lies in the proper algebraic subgroup x3 = 1 (coordinate rank " +
                             std::to_string(rep.coordinate_rank) + ")");
    return rep;
}

struct Example2Report : ScenarioReport {
    ClosureReport closure;
    UnitSystem units;
    std::vector<Ball> four_exp_dets; ///< det [log|x_i|; log|eps_i|] for each lattice generator
    RelationResult rational_multiple;
};

/// A norm-one element of a totally real cubic against the norm-one units.
inline Example2Report run_example2(const Field& k, const FieldElement& x, const RelationOptions& opt = {},
                                   const std::optional<UnitSystem>& units = std::nullopt) {
    if (k->degree() != 3 || !k->totally_real())
        throw InputError("example2: field must be a totally real cubic");
    if (norm(x) != 1)
        throw InputError("example2: x must have norm 1, got " + norm(x).get_str());
    Example2Report rep;
    rep.name = "example2";
    rep.height = opt.height;
    rep.precision = opt.prec;
    rep.inputs = {{"field", k->to_string()}, {"x", x.to_string()}};
    rep.units = norm_one_subgroup(units ? *units : cubic_unit_search(k, 4.0));
    {
        ScenarioStep s{"norm-one units", std::to_string(rep.units.gens.size()) + " generators",
                       to_string(rep.units.maximality), std::nullopt, {}};
        rep.steps.push_back(s);
    }
    LogLattice lam = unit_log_lattice(rep.units);
    rep.closure = closure(lam, {{x}}, opt);
    rep.steps.push_back({"closure of <x>", rep.closure.dense ? "dense" : "dim " + std::to_string(rep.closure.dim),
                         to_string(rep.closure.status), std::nullopt, rep.closure.kernel_chars.row_list()});

    // is (log|x1|, log|x2|) a rational multiple of some unit log vector?
    for (std::size_t i = 0; i < lam.provenance.size(); ++i) {
        Sign s = Sign::Unknown;
        Ball det;
        for (prec_t p = opt.prec;; p *= 2) {
            BallVector a = log_embedding({x}, p), b = lam.basis(p)[i];
            det = a[0] * b[1] - a[1] * b[0];
            s = sign_certified(det);
            // a point of finite order in the quotient may give an exact zero
            if (s != Sign::Unknown || rep.closure.dim == 0 || 2 * p > opt.max_prec)
                break;
        }
        rep.four_exp_dets.push_back(det);
        rep.steps.push_back({"four-exponential determinant with unit " + std::to_string(i), to_string(s), "Certified",
                             det, {}});
    }
    rep.rational_multiple = find_vector_relations(
        [&](prec_t p) {
            BallMatrix m{log_embedding({x}, p)};
            for (const auto& row : lam.basis(p))
                m.push_back(row);
            return m;
        },
        opt);
    rep.steps.push_back(detail::relation_step("rational dependence of log x on the unit lattice", rep.rational_multiple,
                                              "none", "found"));
    rep.conclusion.push_back(rep.closure.dense ? "the multiples of x are dense in T(Z)\\T(R)"
                                               : "closure of <x> has dimension " + std::to_string(rep.closure.dim));
    rep.conclusion.push_back(std::string("status ") + to_string(rep.closure.status) + " at H = " +
                             opt.height.get_str() + ", " + std::to_string(rep.closure.precision) + " bits");
    rep.expected = true;
    return rep;
}

/// The standard non-unit test point (3 - t) / sigma(3 - t), norm exactly 1.
inline FieldElement example2_default_point(const Field& k) {
    FieldElement y = FieldElement(k, RatVector{Rational(3), Rational(-1), Rational(0)});
    return y / apply_automorphism(galois_automorphisms(k)[1], y);
}

struct FourExpReport : ScenarioReport {
    bool preconditions = false;
    RelationResult row_relations;
    RelationResult col_relations;
    Sign det_sign = Sign::Unknown; ///< 2x2
    std::optional<Ball> det;
    std::size_t certified_rank = 0;
    std::pair<std::size_t, std::size_t> minor{0, 0}; ///< 2x3: columns of the certified minor
};

/// Preconditions and conclusion of the four/six exponentials statements for a
/// 2x2 or 2x3 matrix with entries log a_ij, a_ij positive rationals.
inline FourExpReport four_exp_matrix_check(const std::vector<std::vector<Rational>>& a, const RelationOptions& opt = {}) {
    if (a.size() != 2 || (a[0].size() != 2 && a[0].size() != 3) || a[1].size() != a[0].size())
        throw InputError("fourexp: matrix must be 2x2 or 2x3");
    for (const auto& r : a)
        for (const auto& x : r)
            if (x <= 0)
                throw InputError("fourexp: entries must be positive rationals");
    const std::size_t m = a[0].size();
    FourExpReport rep;
    rep.name = "fourexp";
    rep.height = opt.height;
    rep.precision = opt.prec;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < m; ++j)
            rep.inputs.push_back({"a" + std::to_string(i + 1) + std::to_string(j + 1), a[i][j].get_str()});
    auto logs = [&](prec_t p) {
        BallMatrix l(2, BallVector(m, Ball(p)));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < m; ++j)
                l[i][j] = log_rational(a[i][j], p);
        return l;
    };
    // a relation among rows (resp. columns) is exact iff the matching products of a_ij are 1
    RelationOptions ro = opt;
    ro.verifier = [&](const IntVector& c) {
        for (std::size_t j = 0; j < m; ++j) {
            Rational prod = 1;
            for (std::size_t i = 0; i < 2; ++i)
                prod *= detail::rational_pow(a[i][j], c[i]);
            if (prod != 1)
                return Verdict::Refuted;
        }
        return Verdict::Verified;
    };
    rep.row_relations = find_vector_relations(logs, ro);
    RelationOptions co = opt;
    co.verifier = [&](const IntVector& c) {
        for (std::size_t i = 0; i < 2; ++i) {
            Rational prod = 1;
            for (std::size_t j = 0; j < m; ++j)
                prod *= detail::rational_pow(a[i][j], c[j]);
            if (prod != 1)
                return Verdict::Refuted;
        }
        return Verdict::Verified;
    };
    rep.col_relations = find_vector_relations([&](prec_t p) { return transpose(logs(p)); }, co);
    rep.steps.push_back(detail::relation_step("row Q-independence", rep.row_relations, "independent", "dependent"));
    rep.steps.push_back(detail::relation_step("column Q-independence", rep.col_relations, "independent", "dependent"));
    rep.preconditions = rep.row_relations.relations.empty() && rep.col_relations.relations.empty();
    if (!rep.preconditions) {
        for (const auto& c : rep.row_relations.relations)
            rep.conclusion.push_back("PRECONDITION-FAILED: row relation " + detail::vec_string(c) + " (" +
                                     to_string(rep.row_relations.status) + ")");
        for (const auto& c : rep.col_relations.relations)
            rep.conclusion.push_back("PRECONDITION-FAILED: column relation " + detail::vec_string(c) + " (" +
                                     to_string(rep.col_relations.status) + ")");
        return rep;
    }
    for (prec_t p = opt.prec; p <= opt.max_prec; p *= 2) {
        BallMatrix l = logs(p);
        bool done = false;
        for (std::size_t j0 = 0; j0 < m && !done; ++j0)
            for (std::size_t j1 = j0 + 1; j1 < m && !done; ++j1) {
                Ball d = l[0][j0] * l[1][j1] - l[0][j1] * l[1][j0];
                Sign s = sign_certified(d);
                if (s == Sign::Unknown)
                    continue;
                rep.det = d;
                rep.det_sign = s;
                rep.minor = {j0, j1};
                rep.certified_rank = 2;
                done = true;
            }
        if (done)
            break;
    }
    if (m == 2) {
        rep.steps.push_back({"determinant", to_string(rep.det_sign), "Certified", rep.det, {}});
        rep.conclusion.push_back(std::string("preconditions hold (NumericOnly); determinant ") +
                                 to_string(rep.det_sign));
    } else {
        rep.steps.push_back({"rank via minor (" + std::to_string(rep.minor.first + 1) + "," +
                                 std::to_string(rep.minor.second + 1) + ")",
                             "rank " + std::to_string(rep.certified_rank), "Certified", rep.det, {}});
        rep.conclusion.push_back("preconditions hold (NumericOnly); rank " + std::to_string(rep.certified_rank));
    }
    rep.expected = rep.certified_rank == 2;
    return rep;
}

} // namespace toral
