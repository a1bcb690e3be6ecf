#include "spec_io.hpp"

#include "resolvekit/parse.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#ifndef RESOLVEKIT_VERSION
#define RESOLVEKIT_VERSION "dev"
#endif

namespace rk::cli {

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Resolve:
            return "resolve";
        case Mode::Principalize:
            return "principalize";
        case Mode::Embedded:
            return "embedded";
        default:
            return "family";
    }
}

std::optional<Mode> mode_from(const std::string& s) {
    for (Mode m : {Mode::Resolve, Mode::Principalize, Mode::Embedded, Mode::Family})
        if (s == mode_name(m)) return m;
    return std::nullopt;
}

std::vector<std::string> ProblemSpec::ring() const {
    std::vector<std::string> r;
    if (base) r.push_back(*base);
    r.insert(r.end(), vars.begin(), vars.end());
    return r;
}

nlohmann::json ProblemSpec::to_json() const {
    nlohmann::json j;
    j["vars"] = vars;
    if (base) j["base"] = *base;
    j["generators"] = generators;
    j["b"] = b;
    j["E"] = E;
    j["mode"] = mode_name(mode);
    std::vector<std::string> s;
    for (const auto& q : samples) s.push_back(q_str(q));
    j["family"] = {{"samples", s}, {"truncation", truncation}, {"conditions", conditions}};
    j["caps"] = {{"max_steps", max_steps}};
    return j;
}

namespace {

Q parse_rational(const std::string& text, const std::string& field) {
    try {
        Q q(text);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw SpecError(field + ": '" + text + "' is not a rational number");
    }
}

Q rational_of(const nlohmann::json& v, const std::string& field) {
    if (v.is_number_integer()) return Q(v.get<long>());
    if (v.is_string()) return parse_rational(v.get<std::string>(), field);
    throw SpecError(field + ": expected an integer or a rational string");
}

template <class T>
T get_field(const nlohmann::json& j, const std::string& key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw SpecError(where + key + ": missing or of the wrong type");
    }
}

void validate(ProblemSpec& s) {
    if (s.vars.empty()) throw SpecError("vars: at least one variable is required");
    std::set<std::string> seen;
    for (const auto& v : s.ring()) {
        if (v.empty() || !std::isalpha(static_cast<unsigned char>(v[0])))
            throw SpecError("vars: invalid variable name '" + v + "'");
        if (!seen.insert(v).second) throw SpecError("vars: repeated variable '" + v + "'");
    }
    if (s.b < 1) throw SpecError("b: the mark must be at least 1");
    for (const auto& e : s.E) {
        if (s.base && e == *s.base) throw SpecError("E: '" + e + "' is the base variable");
        if (std::find(s.vars.begin(), s.vars.end(), e) == s.vars.end())
            throw SpecError("E: '" + e + "' is not a fiber variable");
    }
    if (s.mode == Mode::Family && !s.base) throw SpecError("base: family mode requires a base variable");
    if (s.generators.empty()) throw SpecError("generators: at least one generator is required");
    if (s.mode == Mode::Embedded && s.generators.size() != 1)
        throw SpecError("generators: embedded mode expects a single equation");
    for (size_t i = 0; i < s.generators.size(); ++i) {
        try {
            Poly p = parse_poly(s.generators[i], s.ring());
            if (p.is_zero()) throw SpecError("generators[" + std::to_string(i) + "]: the zero polynomial");
        } catch (const ParseError& e) {
            throw SpecError("generators[" + std::to_string(i) + "]: " + e.what());
        }
    }
    if (s.truncation < 1) throw SpecError("family.truncation: must be at least 1");
    for (const auto& c : s.conditions)
        if (c != "R" && c != "A" && c != "F" && c != "C" && c != "tau" && c != "E")
            throw SpecError("family.conditions: unknown condition '" + c + "'");
    if (s.max_steps < 0) throw SpecError("caps.max_steps: must be non-negative");
}

std::string line_column(const std::string& text, size_t byte) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

ProblemSpec parse_spec_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SpecError("JSON syntax error at " + line_column(text, e.byte > 0 ? e.byte - 1 : 0));
    }
    if (!j.is_object()) throw SpecError("top level: expected a JSON object");
    ProblemSpec s;
    s.vars = get_field<std::vector<std::string>>(j, "vars", "");
    if (j.contains("base") && !j["base"].is_null()) s.base = get_field<std::string>(j, "base", "");
    s.generators = get_field<std::vector<std::string>>(j, "generators", "");
    s.b = get_field<int>(j, "b", "");
    if (j.contains("E")) s.E = get_field<std::vector<std::string>>(j, "E", "");
    if (j.contains("mode")) {
        auto m = mode_from(get_field<std::string>(j, "mode", ""));
        if (!m) throw SpecError("mode: expected resolve, principalize, embedded or family");
        s.mode = *m;
    }
    if (j.contains("family")) {
        const auto& f = j["family"];
        if (!f.is_object()) throw SpecError("family: expected an object");
        if (f.contains("samples")) {
            if (!f["samples"].is_array()) throw SpecError("family.samples: expected an array");
            s.samples.clear();
            for (const auto& v : f["samples"]) s.samples.push_back(rational_of(v, "family.samples"));
        }
        if (f.contains("truncation")) s.truncation = get_field<int>(f, "truncation", "family.");
        if (f.contains("conditions")) s.conditions = get_field<std::vector<std::string>>(f, "conditions", "family.");
    }
    if (j.contains("caps")) {
        const auto& c = j["caps"];
        if (c.contains("max_steps")) s.max_steps = get_field<int>(c, "max_steps", "caps.");
    }
    validate(s);
    return s;
}

ProblemSpec parse_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec_text(ss.str());
}

std::vector<Q> parse_samples(const std::string& csv) {
    std::vector<Q> r;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) r.push_back(parse_rational(item, "--samples"));
    return r;
}

namespace {

nlohmann::json tree_summary(const ChartTree& t) {
    nlohmann::json j;
    j["length"] = t.length();
    j["stop_reason"] = t.stop_reason;
    std::vector<std::string> maxima;
    for (const auto& s : t.steps) maxima.push_back(s.max.str());
    j["maxima"] = maxima;
    j["monotonicity_violations"] = monotonicity_violations(t);
    j["regime_transitions"] = regime_transitions(t);
    j["tree"] = t.to_json();
    return j;
}

FamilyObject family_of(const ProblemSpec& s) {
    FamilyObject F = make_family(s.ring(), *s.base, s.generators, s.b, s.E, s.samples);
    F.caps.max_steps = s.max_steps;
    return F;
}

nlohmann::json run_family(const ProblemSpec& s) {
    FamilyObject F = family_of(s);
    nlohmann::json out = nlohmann::json::array();
    for (const auto& c : s.conditions) {
        ConditionReport r;
        if (c == "R") r = check_R(F);
        else if (c == "A") r = check_A(F);
        else if (c == "F") r = check_F(F);
        else if (c == "C") r = check_C(F);
        else if (c == "tau") r = check_tau(F);
        else r = check_E_sampled(F, s.truncation);
        out.push_back(r.to_json());
    }
    return out;
}

nlohmann::json run_t_sequence(const ProblemSpec& s) {
    nlohmann::json j;
    try {
        TSequence seq = family_transform_sequence(family_of(s));
        j["length"] = seq.tree.length();
        j["equiresolved"] = seq.equiresolved;
        j["witness"] = seq.witness;
    } catch (const AlgebraError& e) {
        j["error"] = e.what();
    }
    return j;
}

}  // namespace

RunResult run(const ProblemSpec& s) {
    RunResult r;
    r.report["tool"] = {{"name", "resolvekit"}, {"version", RESOLVEKIT_VERSION}};
    r.report["spec"] = s.to_json();
    r.report["caps"] = {{"max_steps", s.max_steps}};
    Caps caps;
    caps.max_steps = s.max_steps;
    auto fail = [&](int code, const std::string& kind, const std::string& msg) {
        r.exit_code = code;
        r.report["error"] = {{"kind", kind}, {"message", msg}};
    };
    try {
        std::vector<Poly> gens;
        for (const auto& g : s.generators) gens.push_back(parse_poly(g, s.ring()));
        std::vector<std::string> base;
        if (s.base) base.push_back(*s.base);
        MarkedChart root = make_chart(s.ring(), base, gens, s.b, s.E);
        root.relative = s.base.has_value();
        ChartTree t;
        switch (s.mode) {
            case Mode::Resolve:
                resolve_into(root, caps, t);
                r.report["result"] = tree_summary(t);
                break;
            case Mode::Principalize:
                t = principalize(root, caps);
                r.report["result"] = tree_summary(t);
                r.report["result"]["principalized"] = principalized(t);
                break;
            case Mode::Embedded: {
                MarkedChart ambient = root;
                t = resolve_embedded(root.I, ambient, caps);
                r.report["result"] = tree_summary(t);
                break;
            }
            case Mode::Family: {
                std::vector<std::string> samples;
                for (const auto& q : s.samples) samples.push_back(q_str(q));
                r.report["samples"] = samples;
                r.report["truncation"] = s.truncation;
                r.report["conditions"] = run_family(s);
                r.report["transform_sequence"] = run_t_sequence(s);
                break;
            }
        }
        if (s.mode != Mode::Family) r.dot = t.to_dot();
    } catch (const ResourceError& e) {
        fail(2, "resource", e.what());
    } catch (const InvariantError& e) {
        fail(3, "invariant", e.what());
    } catch (const ParseError& e) {
        fail(1, "input", e.what());
    } catch (const AlgebraError& e) {
        fail(1, "unsupported", e.what());
    }
    return r;
}

}  // namespace rk::cli
