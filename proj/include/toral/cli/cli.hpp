#pragma once

#include "toral/cli/parse.hpp"
#include "toral/cli/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace toral {

namespace detail {

struct CliConfig {
    std::string field;
    std::vector<std::string> elements;
    std::string units;
    long prec_bits = kDefaultPrecBits;
    long max_prec_bits = kDefaultMaxPrecBits;
    std::string height = std::to_string(kDefaultHeightBound);
    std::string format = "text";
    long seed = 0;
    std::string batch;
    std::size_t copies = 1;
    std::string torus = "normone";
    std::size_t split_rank = 1;
    std::string scenario;
    std::string matrix = "2,3;3,2";
};

inline std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else
            cur += c;
    }
    out.push_back(cur);
    return out;
}

inline RelationOptions relation_options(const CliConfig& c) {
    RelationOptions o;
    if (c.prec_bits < 32 || c.max_prec_bits < c.prec_bits)
        throw InputError("precision: need 32 <= --prec-bits <= --max-prec-bits");
    o.prec = c.prec_bits;
    o.max_prec = c.max_prec_bits;
    try {
        o.height = Integer(c.height);
    } catch (const std::invalid_argument&) {
        throw InputError("--height-bound: not an integer: " + c.height);
    }
    if (o.height < 1)
        throw InputError("--height-bound must be positive");
    return o;
}

inline Field require_field(const CliConfig& c) {
    if (c.field.empty())
        throw InputError("--field is required");
    return parse_field(c.field);
}

inline std::optional<UnitSystem> user_units(const CliConfig& c, const Field& k) {
    if (c.units.empty())
        return std::nullopt;
    std::vector<FieldElement> gens;
    for (const auto& s : split_on(c.units, ';'))
        gens.push_back(parse_element(s, k));
    return verify_units(k, gens);
}

/// Points of a product of `copies` tori over K; components separated by ','.
inline std::vector<TorusPoint> points(const CliConfig& c, const Field& k, bool norm_one) {
    if (c.elements.empty())
        throw InputError("at least one --element is required");
    std::vector<TorusPoint> out;
    for (const auto& e : c.elements) {
        TorusPoint p;
        for (const auto& s : split_on(e, ','))
            p.push_back(parse_element(s, k));
        if (p.size() != c.copies)
            throw InputError("element '" + e + "' has " + std::to_string(p.size()) + " components, expected " +
                             std::to_string(c.copies));
        for (const auto& x : p) {
            if (x.is_zero())
                throw InputError("element '" + e + "' has a zero component");
            if (norm_one && norm(x) != 1)
                throw InputError("element '" + e + "' is not in the norm-one torus: norm " + norm(x).get_str());
        }
        out.push_back(p);
    }
    return out;
}

inline TorusSpec power_torus(const Field& k, std::size_t copies, bool norm_one) {
    if (copies == 0)
        throw InputError("--copies must be positive");
    TorusSpec one = norm_one ? norm_one_torus(k) : restriction_torus(k);
    if (copies == 1)
        return one;
    return product(std::vector<TorusSpec>(copies, one));
}

inline LogLattice norm_one_lattice(const Field& k, const std::optional<UnitSystem>& given, std::size_t copies,
                                   UnitSystem& units_out) {
    units_out = given ? *given : default_units(k);
    return power_lattice(unit_log_lattice(norm_one_subgroup(units_out)), copies);
}

inline std::string status_of(RelationStatus s) { return to_string(s); }

inline void closure_verbs(Report& r, const CliConfig& c, bool algebraicity) {
    RelationOptions opt = relation_options(c);
    Field k = require_field(c);
    auto given = user_units(c, k);
    auto pts = points(c, k, true);
    UnitSystem units;
    LogLattice lam = norm_one_lattice(k, given, c.copies, units);
    ClosureReport rep = closure(lam, pts, opt);
    std::string st = status_of(rep.status);
    r.verdicts.push_back({"dense", rep.dense ? "true" : "false", st, opt.height, opt.prec});
    r.verdicts.push_back({"dim", std::to_string(rep.dim), st, opt.height, opt.prec});
    if (algebraicity) {
        std::string why;
        try {
            ZariskiClosure z = zariski_closure(power_torus(k, c.copies, true), pts, units, opt);
            closure_is_algebraic_structured(rep, lam, z);
            r.results["zariski"] = to_json(z);
        } catch (const NotGaloisError& e) {
            why = e.what();
        }
        std::string ast = rep.algebraic == Algebraicity::Unknown ? "Unverified" : st;
        r.verdicts.push_back({"algebraic", to_string(rep.algebraic), ast, opt.height, opt.prec});
        if (!why.empty())
            r.results["algebraicityNote"] = why;
    }
    r.results["closure"] = to_json(rep);
    r.results["units"] = to_json(units);
}

inline void zariski_verb(Report& r, const CliConfig& c) {
    RelationOptions opt = relation_options(c);
    Field k = require_field(c);
    auto given = user_units(c, k);
    bool norm_one = c.torus == "normone";
    if (!norm_one && c.torus != "restriction")
        throw InputError("zariski: --torus must be normone or restriction");
    TorusSpec s = power_torus(k, c.copies, norm_one);
    auto pts = points(c, k, norm_one);
    ZariskiClosure z = zariski_closure(s, pts, given, opt);
    std::string st = z.conditional ? "NumericOnly" : status_of(z.status);
    r.verdicts.push_back({"dim", std::to_string(z.dim), st, opt.height, opt.prec});
    r.verdicts.push_back({"full", z.dim == s.rank() ? "true" : "false", st, opt.height, opt.prec});
    r.results["zariski"] = to_json(z);
}

inline void embed_verb(Report& r, const CliConfig& c) {
    TorusSpec s;
    if (c.torus == "split")
        s = split_torus(c.split_rank);
    else if (c.torus == "normone" || c.torus == "restriction")
        s = power_torus(require_field(c), c.copies, c.torus == "normone");
    else
        throw InputError("embed: --torus must be normone, restriction or split");
    NormOneEmbedding e = embed_in_norm_one_product(s);
    r.verdicts.push_back({"surjective", "true", "Exact"});
    r.verdicts.push_back({"equivariant", "true", "Exact"});
    r.results["torus"] = s.describe();
    r.results["embedding"] = to_json(e);
}

inline void conjecture2_verb(Report& r, const CliConfig& c) {
    RelationOptions opt = relation_options(c);
    Field k = require_field(c);
    auto given = user_units(c, k);
    auto pts = points(c, k, true);
    UnitSystem units = given ? *given : default_units(k);
    Conjecture2Report rep = conjecture2_test(power_torus(k, c.copies, true), pts, units, opt);
    std::string est = status_of(rep.euclidean.status);
    std::string zst = rep.zariski.conditional ? "NumericOnly" : status_of(rep.zariski.status);
    std::string vst = est == "NumericOnly" || zst == "NumericOnly" ? "NumericOnly" : "VerifiedExact";
    r.verdicts.push_back({"euclideanDim", std::to_string(rep.euclidean_dim), est, opt.height, opt.prec});
    r.verdicts.push_back({"zariskiDim", std::to_string(rep.zariski_dim), zst, opt.height, opt.prec});
    r.verdicts.push_back({"conjecture2", to_string(rep.verdict), vst, opt.height, opt.prec});
    r.results["conjecture2"] = to_json(rep);
    r.results["units"] = to_json(units);
}

inline std::vector<std::vector<Rational>> parse_matrix(const std::string& s) {
    std::vector<std::vector<Rational>> m;
    for (const auto& row : split_on(s, ';')) {
        std::vector<Rational> r;
        for (const auto& e : split_on(row, ','))
            r.push_back(parse_rational(e));
        m.push_back(r);
    }
    return m;
}

inline void fourexp_verb(Report& r, const CliConfig& c) {
    FourExpReport rep = four_exp_matrix_check(parse_matrix(c.matrix), relation_options(c));
    r.verdicts = scenario_verdicts(rep);
    // "hold" only means no relation up to H was found
    const RelationResult& failing = rep.row_relations.relations.empty() ? rep.col_relations : rep.row_relations;
    std::string st = rep.preconditions ? "NumericOnly" : status_of(failing.status);
    r.verdicts.push_back({"preconditions", rep.preconditions ? "hold" : "fail", st, rep.height, rep.precision});
    r.results["scenario"] = to_json(rep);
    r.results["certifiedRank"] = rep.certified_rank;
}

inline void scenario_verb(Report& r, const CliConfig& c) {
    RelationOptions opt = relation_options(c);
    if (c.scenario == "counterexample") {
        CounterexampleReport rep = run_counterexample(opt);
        r.verdicts = scenario_verdicts(rep);
        r.results["scenario"] = to_json(rep);
        r.results["closure"] = to_json(rep.closure);
        r.results["det2"] = to_json(rep.det2);
    } else if (c.scenario == "example2") {
        Field k = parse_field(c.field.empty() ? "x^3 - 3*x - 1" : c.field);
        auto given = user_units(c, k);
        FieldElement x = c.elements.empty() ? example2_default_point(k) : parse_element(c.elements.at(0), k);
        Example2Report rep = run_example2(k, x, opt, given);
        r.verdicts = scenario_verdicts(rep);
        r.results["scenario"] = to_json(rep);
        r.results["closure"] = to_json(rep.closure);
        r.results["units"] = to_json(rep.units);
    } else if (c.scenario == "fourexp") {
        fourexp_verb(r, c);
    } else {
        throw InputError("unknown scenario '" + c.scenario + "' (counterexample, example2, fourexp)");
    }
}

inline int exit_code_for(const Error& e) {
    std::string k = e.kind();
    if (k == "PrecisionExhausted" || k == "SearchEmpty")
        return 2;
    if (k == "InternalError" || k == "StructureError")
        return 3;
    return 1;
}

} // namespace detail

/// Runs one command (argv without the program name) and returns its report.
inline Report run_command(const std::vector<std::string>& args) {
    Report r;
    r.argv = args;
    auto t0 = std::chrono::steady_clock::now();
    detail::CliConfig c;

    CLI::App app{"toral: closures of subgroups of algebraic tori"};
    app.set_help_flag();
    app.require_subcommand(1, 1);
    auto common = [&](CLI::App* s) {
        s->add_option("--field", c.field, "minimal polynomial in x, e.g. \"x^2 - 2\"");
        s->add_option("--element", c.elements, "element in the generator a; ',' separates product components");
        s->add_option("--units", c.units, "unit generators \"e1;e2;...\" (verified)");
        s->add_option("--prec-bits", c.prec_bits);
        s->add_option("--max-prec-bits", c.max_prec_bits);
        s->add_option("--height-bound", c.height);
        s->add_option("--format", c.format)->check(CLI::IsMember({"text", "json"}));
        s->add_option("--seed", c.seed, "reserved; ignored");
        s->add_option("--copies", c.copies, "number of factors of the torus");
    };
    std::vector<std::pair<std::string, CLI::App*>> subs;
    for (const char* v : {"closure", "zariski", "density", "embed", "conjecture2", "scenario", "fourexp"}) {
        CLI::App* s = app.add_subcommand(v);
        common(s);
        subs.push_back({v, s});
    }
    app.get_subcommand("zariski")->add_option("--torus", c.torus);
    app.get_subcommand("embed")->add_option("--torus", c.torus);
    app.get_subcommand("embed")->add_option("--split-rank", c.split_rank);
    app.get_subcommand("scenario")->add_option("name", c.scenario)->required();
    app.get_subcommand("scenario")->add_option("--matrix", c.matrix);
    app.get_subcommand("fourexp")->add_option("--matrix", c.matrix);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
        for (const auto& [name, s] : subs)
            if (s->parsed())
                r.verb = name;
        r.options = Json{{"field", c.field},
                         {"elements", c.elements},
                         {"units", c.units},
                         {"precBits", c.prec_bits},
                         {"maxPrecBits", c.max_prec_bits},
                         {"heightBound", c.height},
                         {"copies", c.copies}};
        if (r.verb == "closure")
            detail::closure_verbs(r, c, true);
        else if (r.verb == "density")
            detail::closure_verbs(r, c, false);
        else if (r.verb == "zariski")
            detail::zariski_verb(r, c);
        else if (r.verb == "embed")
            detail::embed_verb(r, c);
        else if (r.verb == "conjecture2")
            detail::conjecture2_verb(r, c);
        else if (r.verb == "scenario")
            detail::scenario_verb(r, c);
        else if (r.verb == "fourexp")
            detail::fourexp_verb(r, c);
        r.exit_code = 0;
        for (const auto& v : r.verdicts)
            if (v.unknown())
                r.exit_code = 2;
    } catch (const CLI::ParseError& e) {
        r.error = ErrorInfo{"UsageError", e.what()};
        r.exit_code = 1;
    } catch (const Error& e) {
        r.error = ErrorInfo{e.kind(), e.what()};
        r.exit_code = detail::exit_code_for(e);
    } catch (const std::exception& e) {
        r.error = ErrorInfo{"InternalError", e.what()};
        r.exit_code = 3;
    }
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

namespace detail {

inline bool wants_json(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--format=json")
            return true;
        if (args[i] == "--format" && i + 1 < args.size() && args[i + 1] == "json")
            return true;
    }
    return false;
}

inline std::string option_value(const std::vector<std::string>& args, const std::string& flag) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == flag && i + 1 < args.size())
            return args[i + 1];
        if (args[i].rfind(flag + "=", 0) == 0)
            return args[i].substr(flag.size() + 1);
    }
    return {};
}

// exit code precedence across batch lines: internal > input > incomplete > ok
inline int combine_exit(int a, int b) {
    auto rank = [](int e) { return e == 3 ? 3 : e == 1 ? 2 : e == 2 ? 1 : 0; };
    return rank(a) >= rank(b) ? a : b;
}

} // namespace detail

/// Entry point shared by the executable and the tests. Reports go to `out`,
/// diagnostics to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::string batch = detail::option_value(args, "--batch");
    bool json = detail::wants_json(args);
    if (args.empty() || args[0] == "--help" || args[0] == "-h") {
        out << "usage: toral <closure|zariski|density|embed|conjecture2|scenario NAME|fourexp> [options]\n"
               "       toral --batch FILE [--format text|json]\n"
               "options: --field P --element E [--element E ...] --units \"e1;e2\" --copies N\n"
               "         --prec-bits 256 --max-prec-bits 16384 --height-bound 1000000\n"
               "         --format text|json --seed S (ignored)\n"
               "         zariski/embed: --torus normone|restriction|split, embed: --split-rank N\n"
               "         scenario/fourexp: --matrix \"a11,a12;a21,a22\"\n";
        return args.empty() ? 1 : 0;
    }
    if (!batch.empty()) {
        std::ifstream in(batch);
        if (!in) {
            err << "cannot open batch file " << batch << "\n";
            return 1;
        }
        int code = 0;
        std::string line;
        while (std::getline(in, line)) {
            auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#')
                continue;
            std::vector<std::string> a = CLI::detail::split_up(line.substr(first));
            a.erase(std::remove(a.begin(), a.end(), std::string{}), a.end());
            CLI::detail::remove_quotes(a);
            if (!a.empty() && a[0] == "toral")
                a.erase(a.begin());
            if (json && !detail::wants_json(a)) {
                a.push_back("--format");
                a.push_back("json");
            }
            Report r = run_command(a);
            if (r.error)
                err << r.error->kind << ": " << r.error->message << "\n";
            if (detail::wants_json(a))
                out << to_json(r).dump() << "\n";
            else
                out << to_text(r) << "\n";
            code = detail::combine_exit(code, r.exit_code);
        }
        return code;
    }
    Report r = run_command(args);
    if (r.error)
        err << r.error->kind << ": " << r.error->message << "\n";
    if (json)
        out << to_json(r).dump(2) << "\n";
    else
        out << to_text(r);
    return r.exit_code;
}

} // namespace toral
