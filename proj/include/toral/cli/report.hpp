#pragma once

#include "toral/density/density.hpp"
#include "toral/scenarios/scenarios.hpp"
#include "toral/torus/torus.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace toral {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";

/// One named verdict. Conditional verdicts (status NumericOnly) carry the
/// height bound and precision of the search that produced them.
struct VerdictLine {
    std::string name;
    std::string value;
    std::string status; ///< VerifiedExact, NumericOnly, Certified, Structural, Exact, Proven, Unverified
    Integer height = kDefaultHeightBound;
    prec_t precision = kDefaultPrecBits;

    bool conditional() const { return status == "NumericOnly"; }
    bool unknown() const { return value == "Unknown"; }
};

struct ErrorInfo {
    std::string kind;
    std::string message;
};

struct Report {
    std::vector<std::string> argv;
    std::string verb;
    Json options = Json::object();
    Json results = Json::object();
    std::vector<VerdictLine> verdicts;
    std::optional<ErrorInfo> error;
    int exit_code = 0;
    double wall_seconds = 0;
};

inline Json to_json(const Ball& b) {
    return Json{{"mid", b.mid_string()}, {"rad", b.rad_string()}, {"precBits", static_cast<long>(b.prec())}};
}

inline Json to_json(const IntVector& v) {
    Json a = Json::array();
    for (const auto& x : v)
        a.push_back(x.get_str());
    return a;
}

inline Json to_json(const std::vector<IntVector>& rows) {
    Json a = Json::array();
    for (const auto& r : rows)
        a.push_back(to_json(r));
    return a;
}

inline Json to_json(const IntMatrix& m) { return to_json(m.row_list()); }

inline Json to_json(const RelationResult& r) {
    return Json{{"relations", to_json(r.relations)},
                {"status", to_string(r.status)},
                {"heightBound", r.height.get_str()},
                {"precBits", static_cast<long>(r.precision)}};
}

inline Json to_json(const ClosureReport& c) {
    return Json{{"ambientDim", c.n},
                {"dim", c.dim},
                {"dense", c.dense},
                {"kernelChars", to_json(c.kernel_chars)},
                {"algebraic", to_string(c.algebraic)},
                {"subtorusChars", to_json(c.subtorus_chars)},
                {"status", to_string(c.status)},
                {"heightBound", c.height.get_str()},
                {"precBits", static_cast<long>(c.precision)},
                {"latticeMaximality", to_string(c.maximality)}};
}

inline Json to_json(const ZariskiClosure& z) {
    Json rows = Json::array();
    for (auto s : z.xf.verified)
        rows.push_back(to_string(s));
    return Json{{"torus", z.xf.torus.describe()},
                {"torusRank", z.xf.torus.rank()},
                {"dim", z.dim},
                {"xf", to_json(z.xf.basis)},
                {"xfRowStatus", rows},
                {"status", to_string(z.status)},
                {"conditional", z.conditional},
                {"heightBound", z.xf.height.get_str()},
                {"precBits", static_cast<long>(z.xf.precision)}};
}

inline Json to_json(const NormOneEmbedding& e) {
    Json fields = Json::array();
    for (const auto& k : e.fields)
        fields.push_back(k->to_string());
    Json divisors = Json::array();
    for (const auto& d : e.divisors)
        divisors.push_back(d.get_str());
    return Json{{"fixedFields", fields},
                {"stabilizers", e.stabilizers},
                {"cosets", e.cosets},
                {"charMap", to_json(e.char_map)},
                {"elementaryDivisors", divisors}};
}

inline Json to_json(const Conjecture2Report& r) {
    return Json{{"euclideanDim", r.euclidean_dim},
                {"zariskiDim", r.zariski_dim},
                {"verdict", to_string(r.verdict)},
                {"euclidean", to_json(r.euclidean)},
                {"zariski", to_json(r.zariski)}};
}

inline Json to_json(const ScenarioReport& s) {
    Json inputs = Json::array();
    for (const auto& [k, v] : s.inputs)
        inputs.push_back(Json{{"name", k}, {"value", v}});
    Json steps = Json::array();
    for (const auto& st : s.steps) {
        Json j{{"operation", st.operation},
               {"verdict", st.verdict},
               {"certification", st.certification},
               {"vectors", to_json(st.vectors)}};
        if (st.value)
            j["value"] = to_json(*st.value);
        steps.push_back(j);
    }
    return Json{{"name", s.name},
                {"inputs", inputs},
                {"steps", steps},
                {"conclusion", s.conclusion},
                {"expectedConclusionsReached", s.expected},
                {"heightBound", s.height.get_str()},
                {"precBits", static_cast<long>(s.precision)}};
}

inline Json to_json(const UnitSystem& u) {
    Json gens = Json::array();
    for (const auto& g : u.gens)
        gens.push_back(g.to_string("a"));
    Json norms = Json::array();
    for (const auto& n : u.norms)
        norms.push_back(n);
    return Json{{"generators", gens}, {"norms", norms}, {"maximality", to_string(u.maximality)}};
}

/// Verdicts reported by a scenario: one per step.
inline std::vector<VerdictLine> scenario_verdicts(const ScenarioReport& s) {
    std::vector<VerdictLine> out;
    for (const auto& st : s.steps)
        out.push_back({st.operation, st.verdict, st.certification, s.height, s.precision});
    return out;
}

/// The full document. The timings member is the only part that may differ
/// between identical runs.
inline Json to_json(const Report& r, bool with_timings = true) {
    Json verdicts = Json::array();
    for (const auto& v : r.verdicts) {
        Json j{{"name", v.name}, {"value", v.value}, {"status", v.status}};
        if (v.conditional())
            j["conditional"] = Json{{"heightBound", v.height.get_str()}, {"precBits", static_cast<long>(v.precision)}};
        verdicts.push_back(j);
    }
    Json doc{{"schemaVersion", kSchemaVersion},
             {"command", Json{{"verb", r.verb}, {"argv", r.argv}, {"options", r.options}}},
             {"results", r.results},
             {"verdicts", verdicts},
             {"exitCode", r.exit_code}};
    if (r.error)
        doc["error"] = Json{{"kind", r.error->kind}, {"message", r.error->message}};
    if (with_timings)
        doc["timings"] = Json{{"wallSeconds", r.wall_seconds}};
    return doc;
}

namespace detail {

inline void flatten(const Json& j, const std::string& prefix, std::string& out) {
    if (j.is_object()) {
        if (j.contains("mid") && j.contains("rad") && j.size() == 3) {
            out += prefix + ": " + j["mid"].get<std::string>() + " +/- " + j["rad"].get<std::string>() + " (" +
                   std::to_string(j["precBits"].get<long>()) + " bits)\n";
            return;
        }
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        return;
    }
    if (j.is_array()) {
        bool scalars = true;
        for (const auto& e : j)
            scalars = scalars && !e.is_object();
        if (scalars) {
            out += prefix + ": " + j.dump() + "\n";
            return;
        }
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
        return;
    }
    out += prefix + ": " + (j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
}

} // namespace detail

inline std::string verdict_text(const VerdictLine& v) {
    std::string s = v.name + " = " + v.value + " [" + v.status;
    if (v.conditional())
        s += ", H = " + v.height.get_str() + ", prec = " + std::to_string(v.precision);
    return s + "]";
}

/// Human-readable rendering with the same verdict set as the JSON form.
inline std::string to_text(const Report& r) {
    std::string out = "command:";
    for (const auto& a : r.argv)
        out += " " + a;
    out += "\n";
    if (r.error)
        out += "error: " + r.error->kind + ": " + r.error->message + "\n";
    for (const auto& v : r.verdicts)
        out += "verdict: " + verdict_text(v) + "\n";
    detail::flatten(r.results, "", out);
    out += "exit code: " + std::to_string(r.exit_code) + "\n";
    return out;
}

} // namespace toral
