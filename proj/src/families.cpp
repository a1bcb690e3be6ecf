#include "resolvekit/families.hpp"

#include "resolvekit/parse.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace rk {

std::string Sample::str() const {
    return generic ? "generic" : q_str(t0);
}

std::vector<Sample> FamilyObject::sample_points() const {
    std::vector<Sample> r;
    for (const auto& q : samples) r.push_back(Sample::at(q));
    if (include_generic) r.push_back(Sample::generic_point());
    return r;
}

FamilyObject make_family(const std::vector<std::string>& vars, const std::string& t,
                         const std::vector<std::string>& gens, int b, const std::vector<std::string>& E,
                         std::vector<Q> samples) {
    std::vector<Poly> g;
    for (const auto& s : gens) g.push_back(parse_poly(s, vars));
    FamilyObject F;
    F.root = make_chart(vars, {t}, g, b, E);
    F.samples = std::move(samples);
    return F;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Holds:
            return "holds";
        case Verdict::Fails:
            return "fails";
        default:
            return "indeterminate";
    }
}

nlohmann::json ConditionReport::to_json() const {
    nlohmann::json j;
    j["condition"] = condition;
    j["verdict"] = verdict_name(verdict);
    j["step"] = step ? nlohmann::json(*step) : nlohmann::json(nullptr);
    j["sample"] = sample ? nlohmann::json(*sample) : nlohmann::json(nullptr);
    j["witness"] = witness;
    j["notes"] = notes;
    return j;
}

bool TauValue::operator==(const TauValue& o) const {
    if (entries.size() != o.entries.size() || complete != o.complete) return false;
    for (size_t i = 0; i < entries.size(); ++i)
        if (entries[i].first != o.entries[i].first || entries[i].second != o.entries[i].second) return false;
    return true;
}

std::string TauValue::str() const {
    std::string s = "(";
    for (size_t i = 0; i < entries.size(); ++i)
        s += (i ? ", " : "") + entries[i].first.str() + ", " + std::to_string(entries[i].second);
    s += complete ? (entries.empty() ? "inf)" : ", inf)") : ", ...)";
    return s;
}

namespace {

bool contains(const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

ConditionReport report(const std::string& name, Verdict v) {
    ConditionReport r;
    r.condition = name;
    r.verdict = v;
    return r;
}

// The underlying basic object: t becomes an ordinary coordinate, listed
// last so that coordinate searches prefer fiber variables.
MarkedChart aso(const FamilyObject& F) {
    MarkedChart c = F.root;
    c.relative = false;
    c.generic = false;
    c.base.names.clear();
    c.fiber.names.clear();
    for (const auto& v : c.vars)
        if (v != F.t()) c.fiber.names.push_back(v);
    c.fiber.names.push_back(F.t());
    return c;
}

std::vector<std::string> fiber_vars(const MarkedChart& c, const std::string& t) {
    std::vector<std::string> r;
    for (const auto& v : c.vars)
        if (v != t) r.push_back(v);
    return r;
}

// Resolution that keeps the partial tree and the error text.
struct Run {
    ChartTree tree;
    std::string error;
    bool complete() const { return error.empty(); }
};

Run run_resolve(const MarkedChart& c, const Caps& caps) {
    Run r;
    try {
        resolve_into(c, caps, r.tree);
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

std::string path_of(const ChartTree& t, int id) {
    std::string p;
    for (int cur = id; t.node(cur).parent >= 0; cur = t.node(cur).parent) {
        const auto& n = t.node(cur);
        p = n.center_tag + ":" + n.chart_var + (p.empty() ? "" : "/" + p);
    }
    return p;
}

Ideal fiber_ideal(const Ideal& I, const std::string& t, const Sample& s) {
    if (s.generic) return I;
    std::vector<std::string> nv;
    for (const auto& v : I.vars())
        if (v != t) nv.push_back(v);
    std::vector<Poly> g;
    for (const auto& p : I.gens()) g.push_back(substitute(p, {{t, Poly::constant(nv, Scalar(s.t0))}}, nv));
    return Ideal(nv, g);
}

Genericity genericity_of(const std::string& t, const Sample& s) {
    return s.generic ? Genericity{{t}} : Genericity{};
}

// Condition (R) on one chart: absolute and relative singular loci agree.
bool r_holds(const MarkedChart& c, const std::string& t, Ideal* abs_out = nullptr, Ideal* rel_out = nullptr) {
    Ideal abs = sing_locus(c.I, c.b, c.vars);
    Ideal rel = sing_locus(c.I, c.b, fiber_vars(c, t));
    if (abs_out) *abs_out = abs;
    if (rel_out) *rel_out = rel;
    return locus_equal(abs, rel);
}

Poly determinant(std::vector<std::vector<Poly>> m) {
    size_t n = m.size();
    if (n == 1) return m[0][0];
    Poly d(m[0][0].vars());
    for (size_t j = 0; j < n; ++j) {
        std::vector<std::vector<Poly>> minor;
        for (size_t i = 1; i < n; ++i) {
            std::vector<Poly> row;
            for (size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(row);
        }
        Poly term = m[0][j] * determinant(minor);
        d = (j % 2) ? d - term : d + term;
    }
    return d;
}

// V(IC) smooth over T: the maximal minors of the relative Jacobian do not
// all vanish on V(IC).
bool smooth_over_base(const Ideal& IC, const std::vector<std::string>& fiber) {
    const auto& g = IC.gens();
    size_t k = g.size();
    if (k == 0) return true;
    std::vector<Poly> minors;
    std::function<void(size_t, std::vector<size_t>&)> pick = [&](size_t from, std::vector<size_t>& chosen) {
        if (chosen.size() == k) {
            std::vector<std::vector<Poly>> m;
            for (const auto& p : g) {
                std::vector<Poly> row;
                for (size_t c : chosen) row.push_back(partial_derivative(p, fiber[c]));
                m.push_back(row);
            }
            minors.push_back(determinant(m));
            return;
        }
        for (size_t c = from; c < fiber.size(); ++c) {
            chosen.push_back(c);
            pick(c + 1, chosen);
            chosen.pop_back();
        }
    };
    std::vector<size_t> chosen;
    pick(0, chosen);
    return is_trivial(add_generators(IC, minors));
}

bool uses_var(const Poly& p, const std::string& v) {
    int k = p.var_index(v);
    return k >= 0 && p.uses(k);
}

nlohmann::json chart_witness(const ChartTree& t, int id) {
    return {{"chart", path_of(t, id)}, {"I", t.node(id).chart.I.str()}};
}

}  // namespace

ConditionReport check_R(const FamilyObject& F) {
    Ideal abs, rel;
    bool ok = r_holds(F.root, F.t(), &abs, &rel);
    ConditionReport r = report("R", ok ? Verdict::Holds : Verdict::Fails);
    r.witness = {{"absolute_sing", abs.str()}, {"relative_sing", rel.str()}};
    if (!ok) {
        r.step = 0;
        if (is_trivial(abs)) r.notes.push_back("Sing(B) is empty while some fiber is singular");
    }
    return r;
}

ConditionReport check_A(const FamilyObject& F) {
    Run run = run_resolve(aso(F), F.caps);
    const ChartTree& T = run.tree;
    const std::string& t = F.t();
    auto fail = [&](int step, nlohmann::json w, const std::string& note) {
        ConditionReport r = report("A", Verdict::Fails);
        r.step = step;
        r.witness = std::move(w);
        r.notes.push_back(note);
        return r;
    };
    auto check_r = [&](int step, const std::vector<int>& charts) -> std::optional<ConditionReport> {
        for (int id : charts) {
            Ideal abs, rel;
            if (!r_holds(T.node(id).chart, t, &abs, &rel)) {
                auto w = chart_witness(T, id);
                w["absolute_sing"] = abs.str();
                w["relative_sing"] = rel.str();
                return fail(step, w, "condition R fails on B_" + std::to_string(step));
            }
        }
        return std::nullopt;
    };
    for (const auto& rec : T.steps) {
        if (auto bad = check_r(rec.step, rec.charts)) return *bad;
        for (const auto& sc : rec.centers) {
            const MarkedChart& c = T.node(sc.node).chart;
            Ideal IC = center_ideal(c.vars, sc.vars, sc.changes);
            auto w = chart_witness(T, sc.node);
            w["center"] = IC.str();
            auto fv = fiber_vars(c, t);
            if (!eliminate(IC, fv).is_zero()) return fail(rec.step, w, "center is not surjective over T");
            if (!smooth_over_base(IC, fv)) return fail(rec.step, w, "center is not smooth over T");
        }
    }
    if (auto bad = check_r(T.length(), T.active)) return *bad;
    ConditionReport r = report("A", Verdict::Holds);
    if (!run.complete()) {
        r.verdict = Verdict::Indeterminate;
        r.step = T.length();
        r.notes.push_back("resolution of the family stopped: " + run.error);
        return r;
    }
    for (int id : T.active) {
        const MarkedChart& c = T.node(id).chart;
        Ideal rel = sing_locus(c.I, c.b, fiber_vars(c, t));
        if (!is_trivial(rel)) {
            auto w = chart_witness(T, id);
            w["relative_sing"] = rel.str();
            return fail(T.length(), w, "final relative singular locus is not empty");
        }
    }
    r.witness = {{"length", T.length()}};
    return r;
}

namespace {

struct CenterAt {
    int node;
    Ideal ideal;
};

std::map<std::string, CenterAt> centers_by_path(const ChartTree& T, const StepRecord& rec) {
    std::map<std::string, CenterAt> m;
    for (const auto& sc : rec.centers) {
        const MarkedChart& c = T.node(sc.node).chart;
        m.emplace(path_of(T, sc.node), CenterAt{sc.node, center_ideal(c.vars, sc.vars, sc.changes)});
    }
    return m;
}

// Step-by-step comparison of the family with its fibers. `scheme` compares
// centers as ideals (condition C) instead of as sets (condition F).
ConditionReport compare_fibers(const FamilyObject& F, bool scheme) {
    const std::string name = scheme ? "C" : "F";
    const std::string& t = F.t();
    Run fam = run_resolve(aso(F), F.caps);
    bool indeterminate = false;
    std::vector<std::string> notes;
    if (!fam.complete()) notes.push_back("family resolution stopped after " + std::to_string(fam.tree.length()) +
                                         " steps: " + fam.error);
    for (const Sample& s : F.sample_points()) {
        Run fib = run_resolve(F.fiber(s), F.caps);
        if (!fib.complete())
            notes.push_back("fiber " + s.str() + " stopped after " + std::to_string(fib.tree.length()) +
                            " steps: " + fib.error);
        auto fail = [&](int step, nlohmann::json w) {
            ConditionReport r = report(name, Verdict::Fails);
            r.step = step;
            r.sample = s.str();
            r.witness = std::move(w);
            r.notes = notes;
            return r;
        };
        int common = std::min(fam.tree.length(), fib.tree.length());
        for (int i = 0; i < common; ++i) {
            const auto& fr = fam.tree.steps[static_cast<size_t>(i)];
            const auto& sr = fib.tree.steps[static_cast<size_t>(i)];
            if (fr.max != sr.max) return fail(i, {{"family_max", fr.max.str()}, {"fiber_max", sr.max.str()}});
            auto fc = centers_by_path(fam.tree, fr);
            auto sc = centers_by_path(fib.tree, sr);
            std::vector<std::string> paths;
            for (const auto& [p, c] : fc) paths.push_back(p);
            for (const auto& [p, c] : sc)
                if (!fc.count(p)) paths.push_back(p);
            for (const auto& p : paths) {
                auto a = fc.find(p);
                auto b = sc.find(p);
                nlohmann::json w = {{"chart", p},
                                    {"family_center", a != fc.end() ? a->second.ideal.str() : "none"},
                                    {"fiber_center", b != sc.end() ? b->second.ideal.str() : "none"}};
                if (a == fc.end() || b == sc.end()) return fail(i, w);
                Ideal restricted = fiber_ideal(a->second.ideal, t, s);
                Ideal own = b->second.ideal.embed(restricted.vars());
                if (scheme && ideal_equal(restricted, own)) continue;
                if (!locus_equal(restricted, own, genericity_of(t, s))) return fail(i, w);
                if (scheme) notes.push_back("set-level only at step " + std::to_string(i) + ", sample " + s.str());
            }
        }
        int lf = fam.tree.length(), ls = fib.tree.length();
        if ((fam.complete() && ls > lf) || (fib.complete() && lf > ls) ||
            (fam.complete() && fib.complete() && lf != ls))
            return fail(std::min(lf, ls), {{"family_length", lf}, {"fiber_length", ls}});
        if (!fam.complete() || !fib.complete()) indeterminate = true;
    }
    ConditionReport r = report(name, indeterminate ? Verdict::Indeterminate : Verdict::Holds);
    r.notes = notes;
    r.witness = {{"length", fam.tree.length()}};
    return r;
}

}  // namespace

ConditionReport check_F(const FamilyObject& F) {
    return compare_fibers(F, false);
}

ConditionReport check_C(const FamilyObject& F) {
    return compare_fibers(F, true);
}

// ---------------------------------------------------------------------------
// Components of centers. Charts are compared through rational transition
// maps built from the chart tree.

namespace {

struct Frac {
    Poly n, d;
};

Frac reduce(Frac f) {
    if (f.n.is_zero()) return {f.n, Poly::constant(f.n.vars(), Scalar(1))};
    Poly g = poly_gcd(f.n, f.d);
    if (!g.is_constant()) {
        f.n = exact_quotient(f.n, g);
        f.d = exact_quotient(f.d, g);
    }
    return f;
}

Frac frac_mul(const Frac& a, const Frac& b) {
    return reduce({a.n * b.n, a.d * b.d});
}

Frac frac_add(const Frac& a, const Frac& b) {
    return reduce({a.n * b.d + b.n * a.d, a.d * b.d});
}

Frac frac_pow(const Frac& a, int k) {
    return {a.n.pow(k), a.d.pow(k)};
}

// Evaluate p with its variables bound to fractions over `ring`.
Frac frac_eval(const Poly& p, const std::map<std::string, Frac>& at, const std::vector<std::string>& ring) {
    Frac r{Poly(ring), Poly::constant(ring, Scalar(1))};
    for (const auto& [e, c] : p.terms()) {
        Frac m{Poly::constant(ring, c), Poly::constant(ring, Scalar(1))};
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) m = frac_mul(m, frac_pow(at.at(p.vars()[i]), e[i]));
        r = frac_add(r, m);
    }
    return r;
}

const StepCenter* center_of(const ChartTree& T, int node, int step) {
    for (const auto& sc : T.steps.at(static_cast<size_t>(step)).centers)
        if (sc.node == node) return &sc;
    return nullptr;
}

// Chart coordinates as rational functions of the root coordinates.
std::map<std::string, Frac> inverse_map(const ChartTree& T, int id) {
    std::vector<int> path;
    for (int cur = id; cur >= 0; cur = T.node(cur).parent) path.push_back(cur);
    std::reverse(path.begin(), path.end());
    const auto& ring = T.node(0).chart.vars;
    std::map<std::string, Frac> inv;
    for (const auto& v : ring) inv[v] = {Poly::variable(ring, v), Poly::constant(ring, Scalar(1))};
    for (size_t k = 1; k < path.size(); ++k) {
        const TreeNode& child = T.node(path[k]);
        const StepCenter* sc = center_of(T, path[k - 1], child.step - 1);
        if (!sc) throw AlgebraError("chart tree has an edge without a center");
        for (const auto& ch : sc->changes) {
            auto old = inv;
            inv[ch.var] = frac_eval(ch.inverse, old, ring);
        }
        if (sc->divided) continue;
        const Frac ek = inv.at(child.chart_var);
        for (const auto& v : sc->vars)
            if (v != child.chart_var) inv[v] = reduce({inv[v].n * ek.d, inv[v].d * ek.n});
    }
    return inv;
}

// Whether the component V(PA) of chart A and V(PB) of chart B coincide.
bool same_component(const ChartTree& T, int a, const Ideal& PA, int b, const Ideal& PB) {
    const MarkedChart& A = T.node(a).chart;
    auto invB = inverse_map(T, b);
    std::map<std::string, Frac> phi;
    for (const auto& [w, f] : invB) {
        Frac g{substitute(f.n, A.chart_map, A.vars), substitute(f.d, A.chart_map, A.vars)};
        g = reduce(g);
        if (radical_member(g.d, PA)) return false;
        phi[w] = g;
    }
    for (const auto& g : PB.gens()) {
        Frac img = frac_eval(g, phi, A.vars);
        if (!radical_member(img.n, PA)) return false;
    }
    return true;
}

}  // namespace

std::vector<int> center_components(const ChartTree& T) {
    std::vector<int> out;
    for (const auto& rec : T.steps) {
        size_t m = rec.centers.size();
        std::vector<size_t> parent(m);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<size_t(size_t)> find = [&](size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
        std::vector<Ideal> P;
        for (const auto& sc : rec.centers)
            P.push_back(center_ideal(T.node(sc.node).chart.vars, sc.vars, sc.changes));
        for (size_t i = 0; i < m; ++i)
            for (size_t j = i + 1; j < m; ++j)
                if (find(i) != find(j) &&
                    same_component(T, rec.centers[i].node, P[i], rec.centers[j].node, P[j]))
                    parent[find(i)] = find(j);
        int c = 0;
        for (size_t i = 0; i < m; ++i) c += find(i) == i;
        out.push_back(c);
    }
    return out;
}

TauValue tau(const FamilyObject& F, const Sample& s) {
    Run run = run_resolve(F.fiber(s), F.caps);
    TauValue v;
    auto counts = center_components(run.tree);
    for (size_t i = 0; i < run.tree.steps.size(); ++i) v.entries.emplace_back(run.tree.steps[i].max, counts[i]);
    v.complete = run.complete();
    v.error = run.error;
    v.geometric_flag = run.error.find("non-coordinate") != std::string::npos;
    return v;
}

ConditionReport check_tau(const FamilyObject& F) {
    auto points = F.sample_points();
    std::vector<std::pair<Sample, TauValue>> values;
    for (const auto& s : points) values.emplace_back(s, tau(F, s));
    ConditionReport r = report("tau", Verdict::Holds);
    const auto& ref = values.back();
    r.notes.push_back("component counts are taken over Q");
    bool flag = false;
    for (const auto& [s, v] : values) {
        r.witness[s.str()] = v.str();
        flag = flag || v.geometric_flag;
        if (!v.complete) r.notes.push_back("fiber " + s.str() + " stopped: " + v.error);
    }
    if (flag) r.notes.push_back("a center failed to split over Q; geometric component counts may differ");
    for (const auto& [s, v] : values) {
        if (&v == &ref.second) continue;
        const TauValue& g = ref.second;
        size_t common = std::min(v.entries.size(), g.entries.size());
        std::optional<int> bad;
        for (size_t i = 0; i < common && !bad; ++i)
            if (v.entries[i] != g.entries[i]) bad = static_cast<int>(i);
        if (!bad) {
            size_t lv = v.entries.size(), lg = g.entries.size();
            if ((v.complete && lg > lv) || (g.complete && lv > lg) || (v.complete && g.complete && lv != lg))
                bad = static_cast<int>(std::min(lv, lg));
        }
        if (bad) {
            r.verdict = Verdict::Fails;
            r.step = *bad;
            r.sample = s.str();
            return r;
        }
        if (!v.complete || !g.complete) r.verdict = Verdict::Indeterminate;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Condition E. Objects over A_n = Q[s]/(s^(n+1)) are kept with truncated
// coefficients; ideal operations that need a normal form run in Q[s, x]
// with s^(n+1) adjoined.

namespace {

const std::string kS = "~s";

std::vector<std::string> s_ring(const std::vector<std::string>& vars) {
    std::vector<std::string> r{kS};
    r.insert(r.end(), vars.begin(), vars.end());
    return r;
}

Poly to_s(const Poly& p, const std::vector<std::string>& sv) {
    Poly q = Poly(sv);
    for (const auto& [e, c] : p.terms()) {
        Exp f{0};
        for (size_t i = 0; i < e.size(); ++i) f.push_back(e[i]);
        Exp full(sv.size(), 0);
        for (size_t i = 0; i < p.vars().size(); ++i)
            full[static_cast<size_t>(std::find(sv.begin(), sv.end(), p.vars()[i]) - sv.begin())] = e[i];
        if (c.is_rational()) {
            q.add_term(full, c);
            continue;
        }
        const auto& tc = c.truncated();
        for (int k = 0; k <= tc.order(); ++k) {
            if (tc[k] == 0) continue;
            Exp ek = full;
            ek[0] = k;
            q.add_term(ek, Scalar(tc[k]));
        }
    }
    return q;
}

Poly from_s(const Poly& p, int n, const std::vector<std::string>& vars) {
    int si = p.var_index(kS);
    std::map<Exp, std::vector<Q>> acc;
    for (const auto& [e, c] : p.terms()) {
        int k = e[static_cast<size_t>(si)];
        if (k > n) continue;
        Exp f(vars.size(), 0);
        for (size_t i = 0; i < e.size(); ++i) {
            if (static_cast<int>(i) == si) continue;
            const auto& name = p.vars()[i];
            auto it = std::find(vars.begin(), vars.end(), name);
            if (it == vars.end()) {
                if (e[i]) throw AlgebraError("variable '" + name + "' outside the target ring");
                continue;
            }
            f[static_cast<size_t>(it - vars.begin())] = e[i];
        }
        auto& v = acc[f];
        if (v.empty()) v.assign(static_cast<size_t>(n) + 1, Q(0));
        v[static_cast<size_t>(k)] += c.rational();
    }
    Poly r(vars);
    for (const auto& [f, v] : acc) {
        Truncated tc(v, n);
        if (!tc.is_zero()) r.add_term(f, Scalar(tc));
    }
    return r;
}

Poly s_power(const std::vector<std::string>& sv, int n) {
    return Poly::variable(sv, kS).pow(n + 1);
}

Ideal to_s_ideal(const Ideal& I, int n) {
    auto sv = s_ring(I.vars());
    std::vector<Poly> g;
    for (const auto& p : I.gens()) g.push_back(to_s(p, sv));
    g.push_back(s_power(sv, n));
    return Ideal(sv, g);
}

Ideal from_s_ideal(const Ideal& Is, int n, const std::vector<std::string>& vars) {
    std::vector<Poly> g;
    for (const auto& p : Is.basis()) {
        Poly q = from_s(p, n, vars);
        if (!q.is_zero()) g.push_back(q);
    }
    return Ideal(vars, g);
}

// Reduction modulo s^(n+1) of a polynomial of the s-ring.
Poly mod_s(const Poly& p, int n) {
    int si = p.var_index(kS);
    Poly r(p.vars());
    for (const auto& [e, c] : p.terms())
        if (e[static_cast<size_t>(si)] <= n) r.add_term(e, c);
    return r;
}

std::pair<int, int> orders(const Ideal& I, const std::vector<std::string>& center) {
    int all = kInfinity, strict = kInfinity;
    for (const auto& g : I.gens()) {
        all = std::min(all, order_along(g, center));
        strict = std::min(strict, order_along_strict(g, center));
    }
    return {all, strict};
}

struct Failure {
    Verdict verdict;
    std::string note;
    nlohmann::json witness;
};

struct AnPivot {
    Poly c;  // polynomial in s with nonzero constant term
    Poly h;
};

std::optional<AnPivot> an_pivot(const Poly& f, const std::string& z, const std::vector<std::string>& forbidden,
                                int n) {
    int zi = f.var_index(z);
    int si = f.var_index(kS);
    Poly c(f.vars()), h(f.vars());
    for (const auto& [e, k] : f.terms()) {
        if (e[static_cast<size_t>(zi)] == 0) {
            h.add_term(e, k);
            continue;
        }
        if (e[static_cast<size_t>(zi)] > 1) return std::nullopt;
        for (size_t i = 0; i < e.size(); ++i)
            if (static_cast<int>(i) != zi && static_cast<int>(i) != si && e[i] != 0) return std::nullopt;
        Exp se(e.size(), 0);
        se[static_cast<size_t>(si)] = e[static_cast<size_t>(si)];
        c.add_term(se, k);
    }
    if (c.constant_term().is_zero()) return std::nullopt;
    h = mod_s(h, n);
    if (!h.is_zero()) {
        if (contains(forbidden, z)) return std::nullopt;
        for (const auto& v : forbidden)
            if (uses_var(h, v)) return std::nullopt;
    }
    return AnPivot{c, h};
}

std::optional<AnPivot> search_an_pivot(const std::vector<Poly>& B, const std::string& z,
                                       const std::vector<std::string>& forbidden, int n) {
    for (const auto& f : B)
        if (auto p = an_pivot(f, z, forbidden, n)) return p;
    size_t m = std::min<size_t>(B.size(), 10);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j)
            for (int sj : {1, -1}) {
                Poly f = B[i] + B[j].scaled(Scalar(sj));
                if (auto p = an_pivot(f, z, forbidden, n)) return p;
                for (size_t k = j + 1; k < m; ++k)
                    for (int sk : {1, -1})
                        if (auto q = an_pivot(f + B[k].scaled(Scalar(sk)), z, forbidden, n)) return q;
            }
    return std::nullopt;
}

// Change z -> (z - h) / c over A_n; the s-ring image is returned as well.
std::pair<CoordinateChange, Poly> an_change(const AnPivot& p, const std::string& z, const std::vector<std::string>& vars,
                                            int n, int level) {
    auto sv = s_ring(vars);
    std::vector<Q> cv(static_cast<size_t>(n) + 1, Q(0));
    int si = p.c.var_index(kS);
    for (const auto& [e, k] : p.c.terms())
        if (e[static_cast<size_t>(si)] <= n) cv[static_cast<size_t>(e[static_cast<size_t>(si)])] += k.rational();
    Truncated inv = Truncated(cv, n).inverse();
    Poly cinv(sv);
    for (int k = 0; k <= n; ++k) {
        Exp e(sv.size(), 0);
        e[0] = k;
        if (inv[k] != 0) cinv.add_term(e, Scalar(inv[k]));
    }
    Poly zv = Poly::variable(sv, z);
    Poly h = p.h.embed(sv);
    Poly image_s = mod_s((zv - h) * cinv, n);
    Poly inverse_s = mod_s(p.c.embed(sv) * zv + h, n);
    CoordinateChange ch{level, z, from_s(image_s, n, vars), from_s(inverse_s, n, vars)};
    return {ch, image_s};
}

Ideal substitute_ideal(const Ideal& I, const std::string& v, const Poly& image) {
    std::vector<Poly> g;
    for (const auto& p : I.gens()) g.push_back(substitute(p, {{v, image.embed(I.vars())}}));
    return Ideal(I.vars(), g);
}

struct NiceS {
    Ideal I2;  // s-ring, contains s^(n+1)
    int b2 = 1;
};

NiceS nice_over_An(const MarkedChart& obj, int b_r, const std::vector<std::string>& piece, int n) {
    Ideal Ibar = to_s_ideal(obj.Ibar, n);
    auto sv = Ibar.vars();
    NiceS r;
    Ideal J;
    if (b_r >= obj.b) {
        J = Ibar;
        r.b2 = b_r;
    } else {
        Poly M = to_s(exceptional_monomial(obj), sv);
        J = ideal_sum(ideal_power(Ibar, obj.b - b_r), Ideal(sv, {M.pow(b_r)}));
        r.b2 = b_r * (obj.b - b_r);
    }
    std::vector<Poly> extra{s_power(sv, n)};
    for (const auto& v : piece) extra.push_back(Poly::variable(sv, v).pow(r.b2));
    r.I2 = add_generators(J, extra).tidy();
    return r;
}

Ideal reduce_mod_s(const Ideal& I) {
    std::vector<Poly> g;
    for (const auto& p : I.gens()) {
        Poly q(p.vars());
        for (const auto& [e, c] : p.terms()) {
            Q v = c.is_rational() ? c.rational() : c.truncated()[0];
            if (v != 0) q.add_term(e, Scalar(v));
        }
        g.push_back(q);
    }
    return Ideal(I.vars(), g);
}

struct AnCertifier {
    int n;
    int step;
    std::vector<CoordinateChange> changes;
    std::optional<Failure> failure;

    void fail(Verdict v, const std::string& note, nlohmann::json w = nlohmann::json::object()) {
        if (!failure) failure = Failure{v, note, std::move(w)};
    }

    bool permissible_at(const MarkedChart& obj, const std::vector<std::string>& center, const std::string& what) {
        auto [all, strict] = orders(obj.I, center);
        if (all == strict && all >= obj.b) return true;
        fail(Verdict::Fails, what + ": order over A_n differs from the fiber order",
             {{"I", obj.I.str()}, {"center", center}, {"nu_An", all}, {"nu_fiber", strict}, {"b", obj.b}});
        return false;
    }

    void monomial(const MarkedChart& obj, const std::vector<std::string>& center) {
        Exp m(obj.vars.size(), 0);
        for (const auto& d : obj.E) {
            if (d.birth <= obj.start) continue;
            auto [all, strict] = orders(obj.I, {d.var});
            if (all != strict) {
                fail(Verdict::Fails, "object over A_n is not monomial", {{"I", obj.I.str()}, {"divisor", d.var}});
                return;
            }
            m[static_cast<size_t>(std::find(obj.vars.begin(), obj.vars.end(), d.var) - obj.vars.begin())] = all;
        }
        std::vector<Poly> units;
        for (const auto& g : obj.I.gens()) {
            Poly q = divide_by_monomial(g, m);
            Poly q0(obj.vars);
            for (const auto& [e, c] : q.terms()) {
                Q v = c.is_rational() ? c.rational() : c.truncated()[0];
                if (v != 0) q0.add_term(e, Scalar(v));
            }
            units.push_back(q0);
        }
        Ideal sing0 = sing_locus(reduce_mod_s(obj.I), obj.b, obj.derivation_vars());
        if (!is_trivial(ideal_sum(Ideal(obj.vars, units), sing0))) {
            fail(Verdict::Fails, "object over A_n is not monomial", {{"I", obj.I.str()}});
            return;
        }
        permissible_at(obj, center, "monomial center");
    }

    // Finds the pivot for z in D; applies the change to obj and D.
    bool align(MarkedChart& obj, Ideal& D, const std::string& z, int level) {
        std::vector<std::string> forbidden = obj.divisor_vars();
        auto p = search_an_pivot(D.basis(), z, forbidden, n);
        if (!p) {
            fail(Verdict::Indeterminate, "no maximal contact over A_n for " + z, {{"Delta", D.str()}});
            return false;
        }
        if (mod_s(p->h, n).is_zero()) return true;
        auto [ch, image_s] = an_change(*p, z, obj.vars, n, level);
        changes.push_back(ch);
        obj = change_coordinates(obj, z, ch.image);
        D = substitute_ideal(D, z, image_s);
        return true;
    }

    void codim_one(MarkedChart obj, const RFValue& v, const std::string& var, int level) {
        Q br = v.omega() * obj.b;
        NiceS ns = nice_over_An(obj, static_cast<int>(br.get_num().get_si()), v.n() ? std::vector<std::string>{var}
                                                                                 : std::vector<std::string>{},
                                n);
        Ideal D = delta(ns.I2, ns.b2 - 1, obj.derivation_vars()).tidy();
        if (!align(obj, D, var, level)) return;
        for (const auto& g : D.gens()) {
            Poly r = mod_s(substitute(g, {{var, Poly(g.vars())}}), n);
            if (!r.is_zero()) {
                fail(Verdict::Fails, "Delta^(b''-1)(I''/S) over A_n does not define the center",
                     {{"Delta", from_s_ideal(D, n, obj.vars).str()}, {"center", var}, {"level", level}});
                return;
            }
        }
        permissible_at(obj, {var}, "codimension-one center at level " + std::to_string(level));
    }

    // Certifies the level object `obj` with fiber value v; returns the A_n
    // inductive object for the next level.
    std::shared_ptr<const LevelNode> level(MarkedChart obj, int lvl, const RFValue& v,
                                           const std::vector<std::string>& center, const LevelNode* fnode,
                                           const std::shared_ptr<const LevelNode>& stored) {
        if (failure) return nullptr;
        std::vector<std::string> rest(center.begin() + lvl, center.end());
        if (v.kind() == RFValue::Kind::Monomial) {
            monomial(obj, rest);
            return nullptr;
        }
        if (v.kind() != RFValue::Kind::TPair) {
            fail(Verdict::Indeterminate, "unexpected value " + v.str());
            return nullptr;
        }
        if (v.tail().kind() == RFValue::Kind::Top) {
            codim_one(obj, v, rest.at(0), lvl);
            return nullptr;
        }
        if (!fnode || fnode->z != rest.at(0)) {
            fail(Verdict::Indeterminate, "fiber inductive object missing at level " + std::to_string(lvl));
            return nullptr;
        }
        const std::string& z = fnode->z;
        std::shared_ptr<LevelNode> node;
        if (fnode->created == step || !stored) {
            Q br = fnode->omega * obj.b;
            NiceS ns = nice_over_An(obj, static_cast<int>(br.get_num().get_si()), fnode->piece, n);
            auto dv = obj.derivation_vars();
            Ideal D = delta(ns.I2, ns.b2 - 1, dv).tidy();
            size_t before = changes.size();
            if (!align(obj, D, z, lvl)) return nullptr;
            Ideal I2 = ns.I2;
            if (changes.size() > before) {
                const auto& ch = changes.back();
                I2 = add_generators(substitute_ideal(I2, z, to_s(ch.image.embed(obj.vars), I2.vars())), {});
            }
            Ideal H = homogenize(I2, ns.b2, dv);
            WeightedIdeal C = restricted_coefficient_ideal(H, ns.b2, dv, z);
            Ideal Cs = add_generators(C.ideal, {s_power(C.ideal.vars(), n)});
            node = std::make_shared<LevelNode>(*fnode);
            MarkedChart next = fnode->obj;
            next.I = from_s_ideal(Cs, n, next.vars);
            next.b = C.b;
            if (next.I.is_zero()) {
                fail(Verdict::Indeterminate, "coefficient ideal over A_n vanishes on V(" + z + ")");
                return nullptr;
            }
            refresh_proper(next);
            node->obj = next;
            node->created = step;
        } else {
            node = std::make_shared<LevelNode>(*stored);
        }
        node->child = level(node->obj, lvl + 1, v.tail(), center, fnode->child.get(), node->child);
        return node;
    }
};


}  // namespace

ConditionReport check_E(const FamilyObject& F, const Q& t0, int n) {
    if (n < 1) throw AlgebraError("truncation order must be at least 1");
    ConditionReport r = report("E", Verdict::Holds);
    r.sample = q_str(t0);
    r.witness["n"] = n;
    Run fib = run_resolve(F.fiber(Sample::at(t0)), F.caps);
    const ChartTree& T = fib.tree;
    struct AnState {
        MarkedChart chart;
        std::shared_ptr<const LevelNode> chain;
    };
    std::map<int, AnState> an;
    an[0] = {fiberize(F.root, FiberPoint::truncate(n, t0)), nullptr};
    for (const auto& rec : T.steps) {
        for (const auto& sc : rec.centers) {
            const TreeNode& fn = T.node(sc.node);
            AnState& st = an.at(sc.node);
            AnCertifier cert{n, rec.step, {}, std::nullopt};
            MarkedChart top = st.chart;
            top.start = 0;
            refresh_proper(top);
            auto chain = cert.level(top, 0, *fn.value, sc.vars, sc.chain.get(), st.chain);
            MarkedChart changed = apply_changes(st.chart, cert.changes);
            if (!cert.failure) cert.permissible_at(changed, sc.vars, "center");
            if (!cert.failure) {
                Ideal lifted = reduce_mod_s(center_ideal(st.chart.vars, sc.vars, cert.changes));
                Ideal own = center_ideal(fn.chart.vars, sc.vars, sc.changes);
                if (!ideal_equal(lifted, own))
                    cert.fail(Verdict::Indeterminate, "lifted center does not reduce to the fiber center",
                              {{"lifted", lifted.str()}, {"fiber", own.str()}});
            }
            if (cert.failure) {
                r.verdict = cert.failure->verdict;
                r.step = rec.step;
                r.witness["chart"] = path_of(T, sc.node);
                r.witness["detail"] = cert.failure->witness;
                r.notes.push_back(cert.failure->note);
                return r;
            }
            for (const auto& kid : T.nodes) {
                if (kid.parent != sc.node) continue;
                if (sc.divided) {
                    an[kid.id] = {divide_along(changed, sc.vars[0], rec.step + 1), nullptr};
                    continue;
                }
                auto kids = blowup(changed, sc.vars, rec.step + 1);
                size_t k = static_cast<size_t>(std::find(sc.vars.begin(), sc.vars.end(), kid.chart_var) -
                                               sc.vars.begin());
                an[kid.id] = {kids.at(k),
                              transform_chain(chain, sc.vars, kid.chart_var, rec.step + 1, cert.changes, 1)};
            }
        }
    }
    r.witness["length"] = T.length();
    if (!fib.complete()) {
        r.verdict = Verdict::Indeterminate;
        r.step = T.length();
        r.notes.push_back("fiber resolution stopped: " + fib.error);
    }
    return r;
}

ConditionReport check_E_sampled(const FamilyObject& F, int n) {
    ConditionReport agg = report("E", Verdict::Holds);
    agg.witness = nlohmann::json::array();
    for (const auto& t0 : F.samples)
        for (int k = 1; k <= n; ++k) {
            ConditionReport r = check_E(F, t0, k);
            agg.witness.push_back(r.to_json());
            if (r.fails() && !agg.fails()) {
                agg.verdict = Verdict::Fails;
                agg.step = r.step;
                agg.sample = r.sample;
                agg.notes.push_back("fails at t0 = " + q_str(t0) + ", n = " + std::to_string(k));
            } else if (r.verdict == Verdict::Indeterminate && agg.holds()) {
                agg.verdict = Verdict::Indeterminate;
            }
        }
    return agg;
}

std::optional<Poly> permissibility_defect(const MarkedChart& c, const std::vector<std::string>& center) {
    const std::string& t = c.base.names.at(0);
    int ti = std::find(c.vars.begin(), c.vars.end(), t) - c.vars.begin();
    int m = kInfinity;
    for (const auto& g : c.I.gens()) m = std::min(m, order_along(g, center));
    if (m == kInfinity) return std::nullopt;
    std::vector<size_t> cidx;
    for (const auto& v : center) cidx.push_back(static_cast<size_t>(std::find(c.vars.begin(), c.vars.end(), v) - c.vars.begin()));
    // Coefficients in Q[t] of the order-m forms, grouped by the remaining
    // exponents.
    std::map<Exp, Poly> groups;
    for (const auto& g : c.I.gens()) {
        if (order_along(g, center) != m) continue;
        for (const auto& [e, k] : g.terms()) {
            int deg = 0;
            for (size_t i : cidx) deg += e[i];
            if (deg != m) continue;
            Exp key = e;
            key[static_cast<size_t>(ti)] = 0;
            Exp te(e.size(), 0);
            te[static_cast<size_t>(ti)] = e[static_cast<size_t>(ti)];
            auto it = groups.find(key);
            if (it == groups.end()) it = groups.emplace(key, Poly(c.vars)).first;
            it->second.add_term(te, k);
        }
    }
    Poly gcd;
    bool first = true;
    for (const auto& [key, p] : groups) {
        if (p.is_zero()) continue;
        gcd = first ? p : poly_gcd(gcd, p);
        first = false;
    }
    if (first || gcd.is_constant()) return std::nullopt;
    return gcd;
}

TSequence family_transform_sequence(const FamilyObject& F) {
    TSequence out;
    resolve_into(aso(F), F.caps, out.tree);
    const ChartTree& T = out.tree;
    for (const auto& rec : T.steps)
        for (const auto& sc : rec.centers) {
            MarkedChart c = apply_changes(T.node(sc.node).chart, sc.changes);
            c.base.names = {F.t()};
            Ideal IC = center_ideal(T.node(sc.node).chart.vars, sc.vars, sc.changes);
            auto fv = fiber_vars(c, F.t());
            if (!eliminate(IC, fv).is_zero() || !smooth_over_base(IC, fv))
                throw AlgebraError("center " + IC.str() + " at step " + std::to_string(rec.step) +
                                   " is not smooth and surjective over T");
            if (auto bad = permissibility_defect(c, sc.vars))
                throw AlgebraError("center V(" + [&] {
                    std::string s;
                    for (const auto& v : sc.vars) s += (s.empty() ? "" : ",") + v;
                    return s;
                }() + ") at step " + std::to_string(rec.step) + " is not T-permissible: the order jumps where " +
                                   bad->str() + " = 0");
        }
    out.equiresolved = true;
    for (int id : T.active) {
        const MarkedChart& c = T.node(id).chart;
        Ideal rel = sing_locus(c.I, c.b, fiber_vars(c, F.t()));
        if (!is_trivial(rel)) {
            out.equiresolved = false;
            out.witness = {{"chart", path_of(T, id)}, {"I", c.I.str()}, {"relative_sing", rel.str()}};
            break;
        }
    }
    return out;
}

bool blowup_commutes(const MarkedChart& family, const std::vector<std::string>& center, const Sample& s) {
    auto up = [&](const MarkedChart& c) {
        if (center.size() == 1) return std::vector<MarkedChart>{divide_along(c, center[0], 1)};
        return blowup(c, center, 1);
    };
    auto a = up(family);
    auto b = up(fiberize(family, s.point()));
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        MarkedChart fa = fiberize(a[i], s.point());
        if (fa.vars != b[i].vars || fa.divisor_vars() != b[i].divisor_vars() || fa.b != b[i].b) return false;
        if (!ideal_equal(fa.I, b[i].I)) return false;
        for (const auto& [r, p] : b[i].chart_map) {
            auto it = fa.chart_map.find(r);
            if (it == fa.chart_map.end() || it->second != p) return false;
        }
    }
    return true;
}

}  // namespace rk
