#include "resolvekit/chart.hpp"

#include <algorithm>

namespace rk {

std::vector<std::string> MarkedChart::derivation_vars() const {
    return (relative || generic) ? fiber.names : vars;
}

Genericity MarkedChart::genericity() const {
    return generic ? Genericity{base.names} : Genericity{};
}

bool MarkedChart::is_divisor_var(const std::string& v) const {
    return divisor_of(v) != nullptr;
}

const Divisor* MarkedChart::divisor_of(const std::string& v) const {
    for (const auto& d : E)
        if (d.var == v) return &d;
    return nullptr;
}

std::vector<std::string> MarkedChart::divisor_vars() const {
    std::vector<std::string> r;
    for (const auto& d : E) r.push_back(d.var);
    return r;
}

std::string MarkedChart::describe() const {
    std::string s = I.str() + "; " + std::to_string(b) + "; [";
    for (size_t i = 0; i < E.size(); ++i) s += (i ? "," : "") + E[i].var + "#" + std::to_string(E[i].index);
    return s + "]";
}

MarkedChart make_chart(const std::vector<std::string>& vars, const std::vector<std::string>& base,
                       const std::vector<Poly>& gens, int b, const std::vector<std::string>& E) {
    if (b < 1) throw AlgebraError("mark must be positive");
    MarkedChart c;
    c.vars = vars;
    for (const auto& v : base) {
        if (std::find(vars.begin(), vars.end(), v) == vars.end())
            throw AlgebraError("base variable '" + v + "' is not a ring variable");
        c.base.names.push_back(v);
    }
    for (const auto& v : vars)
        if (!c.base.contains(v)) c.fiber.names.push_back(v);
    c.I = Ideal(vars, gens);
    c.b = b;
    int idx = 0;
    for (const auto& e : E) {
        if (!c.fiber.contains(e)) throw AlgebraError("divisor '" + e + "' is not a fiber variable");
        if (c.is_divisor_var(e)) throw AlgebraError("repeated divisor '" + e + "'");
        c.E.push_back({e, 0, ++idx, true});
    }
    c.input_divisors = idx;
    c.Ibar = c.I;
    c.root_vars = vars;
    for (const auto& v : vars) c.chart_map[v] = Poly::variable(vars, v);
    c.total_factor = Poly::constant(vars, Scalar(1));
    return c;
}

Ideal controlled_transform(const Ideal& total, int b, const std::string& exc) {
    std::vector<Poly> out;
    for (const auto& g : total.gens()) {
        int k = g.var_index(exc);
        if (k < 0) throw AlgebraError("unknown variable '" + exc + "'");
        Exp m(g.nvars(), 0);
        m[static_cast<size_t>(k)] = b;
        if (order_along(g, {exc}) < b) throw AlgebraError("center was not permissible: exceptional power too small");
        out.push_back(divide_by_monomial(g, m));
    }
    return Ideal(total.vars(), out);
}

std::pair<Ideal, int> proper_transform(const Ideal& I, const std::string& exc) {
    if (I.is_zero()) return {I, 0};
    int a = kInfinity;
    for (const auto& g : I.gens()) a = std::min(a, order_along(g, {exc}));
    std::vector<Poly> out;
    for (const auto& g : I.gens()) {
        Exp m(g.nvars(), 0);
        m[static_cast<size_t>(g.var_index(exc))] = a;
        out.push_back(divide_by_monomial(g, m));
    }
    return {Ideal(I.vars(), out), a};
}

void refresh_proper(MarkedChart& c) {
    c.a.clear();
    Ideal J = c.I;
    for (const auto& d : c.E) {
        if (d.birth <= c.start) continue;
        auto [K, a] = proper_transform(J, d.var);
        J = K;
        c.a[d.birth] = a;
    }
    c.Ibar = J;
}

namespace {

Ideal map_ideal(const Ideal& I, const std::map<std::string, Poly>& sigma, const std::vector<std::string>& target) {
    std::vector<Poly> g;
    for (const auto& p : I.gens()) g.push_back(substitute(p, sigma, target));
    return Ideal(target, g);
}

void check_fiber_center(const MarkedChart& c, const std::vector<std::string>& center) {
    for (const auto& v : center) {
        if (c.base.contains(v)) throw AlgebraError("base variable '" + v + "' in center");
        if (!c.fiber.contains(v)) throw AlgebraError("center is not coordinate-aligned: unknown variable '" + v + "'");
    }
}

}  // namespace

std::vector<MarkedChart> blowup(const MarkedChart& chart, const std::vector<std::string>& center_vars, int birth) {
    if (center_vars.size() < 2) throw AlgebraError("codimension-one center: blow-up is the identity");
    check_fiber_center(chart, center_vars);
    std::vector<MarkedChart> out;
    for (const auto& vk : center_vars) {
        std::map<std::string, Poly> sigma;
        Poly pk = Poly::variable(chart.vars, vk);
        for (const auto& vl : center_vars)
            if (vl != vk) sigma[vl] = Poly::variable(chart.vars, vl) * pk;
        MarkedChart c = chart;
        Ideal total = map_ideal(chart.I, sigma, chart.vars);
        c.I = controlled_transform(total, chart.b, vk);
        c.E.clear();
        for (const auto& d : chart.E)
            if (d.var != vk) c.E.push_back(d);
        c.E.push_back({vk, birth, chart.input_divisors + birth, true});
        for (auto& [r, p] : c.chart_map) p = substitute(p, sigma, chart.vars);
        c.total_factor = substitute(chart.total_factor, sigma, chart.vars) * pk.pow(chart.b);
        refresh_proper(c);
        out.push_back(std::move(c));
    }
    return out;
}

MarkedChart divide_along(const MarkedChart& chart, const std::string& v, int birth) {
    check_fiber_center(chart, {v});
    MarkedChart c = chart;
    c.I = controlled_transform(chart.I, chart.b, v);
    c.E.clear();
    for (const auto& d : chart.E)
        if (d.var != v) c.E.push_back(d);
    c.E.push_back({v, birth, chart.input_divisors + birth, true});
    c.total_factor = chart.total_factor * Poly::variable(chart.vars, v).pow(chart.b);
    refresh_proper(c);
    return c;
}

MarkedChart change_coordinates(const MarkedChart& chart, const std::string& v, const Poly& image) {
    if (!chart.fiber.contains(v)) throw AlgebraError("coordinate change must move a fiber variable");
    Poly img = image.embed(chart.vars);
    int k = img.var_index(v);
    Poly rest = img;
    Scalar lin;
    {
        Exp e(chart.vars.size(), 0);
        e[static_cast<size_t>(k)] = 1;
        auto it = img.terms().find(e);
        if (it == img.terms().end()) throw AlgebraError("coordinate change is not invertible");
        lin = it->second;
        rest = img - Poly::monomial(chart.vars, e, lin);
        if (rest.uses(k)) throw AlgebraError("coordinate change is not triangular");
    }
    if (chart.is_divisor_var(v) && !(rest.is_zero() && lin.is_one()))
        throw AlgebraError("coordinate change would move a divisor");
    std::map<std::string, Poly> sigma{{v, img}};
    MarkedChart c = chart;
    c.I = map_ideal(chart.I, sigma, chart.vars);
    for (auto& [r, p] : c.chart_map) p = substitute(p, sigma, chart.vars);
    c.total_factor = substitute(chart.total_factor, sigma, chart.vars);
    refresh_proper(c);
    return c;
}

std::string FiberPoint::str() const {
    switch (kind) {
        case Generic:
            return "generic";
        case Truncate:
            return "truncate(n=" + std::to_string(n) + ",t0=" + q_str(t0) + ")";
        default:
            return q_str(t0);
    }
}

Poly truncate_poly(const Poly& p, const std::string& t, const Q& t0, int n) {
    int ti = p.var_index(t);
    if (ti < 0) throw AlgebraError("unknown variable '" + t + "'");
    std::vector<std::string> nv;
    for (const auto& v : p.vars())
        if (v != t) nv.push_back(v);
    Poly r(nv);
    for (const auto& [e, c] : p.terms()) {
        int k = e[static_cast<size_t>(ti)];
        std::vector<Q> coeffs(static_cast<size_t>(n) + 1, Q(0));
        // (t0 + s)^k = sum_j binom(k, j) t0^(k-j) s^j
        mpz_class binom = 1;
        for (int j = 0; j <= std::min(k, n); ++j) {
            if (j > 0) binom = binom * (k - j + 1) / j;
            Q pw = 1;
            for (int i = 0; i < k - j; ++i) pw *= t0;
            coeffs[static_cast<size_t>(j)] = Q(binom) * pw;
        }
        Truncated tc(coeffs, n);
        Exp f;
        for (size_t i = 0; i < e.size(); ++i)
            if (static_cast<int>(i) != ti) f.push_back(e[i]);
        r.add_term(f, Scalar(tc) * c);
    }
    return r;
}

MarkedChart fiberize(const MarkedChart& chart, const FiberPoint& p) {
    if (chart.base.names.size() != 1) throw AlgebraError("fiberize needs exactly one base variable");
    const std::string t = chart.base.names[0];
    MarkedChart c = chart;
    if (p.kind == FiberPoint::Generic) {
        c.generic = true;
        c.relative = true;
        return c;
    }
    std::vector<std::string> nv;
    for (const auto& v : chart.vars)
        if (v != t) nv.push_back(v);
    auto conv = [&](const Poly& q) {
        if (p.kind == FiberPoint::Rational)
            return substitute(q, {{t, Poly::constant(nv, Scalar(p.t0))}}, nv);
        return truncate_poly(q, t, p.t0, p.n);
    };
    auto conv_ideal = [&](const Ideal& I) {
        std::vector<Poly> g;
        for (const auto& q : I.gens()) g.push_back(conv(q));
        return Ideal(nv, g);
    };
    c.vars = nv;
    c.base.names.clear();
    c.fiber.names = nv;
    c.generic = false;
    c.relative = false;
    c.I = conv_ideal(chart.I);
    for (auto& [r, q] : c.chart_map) q = conv(q);
    c.total_factor = conv(chart.total_factor);
    refresh_proper(c);
    return c;
}

bool bookkeeping_holds(const MarkedChart& c) {
    Exp m(c.vars.size(), 0);
    for (const auto& d : c.E) {
        if (d.birth <= c.start) continue;
        auto it = c.a.find(d.birth);
        if (it != c.a.end() && it->second != kInfinity) m[static_cast<size_t>(std::find(c.vars.begin(), c.vars.end(), d.var) - c.vars.begin())] += it->second;
    }
    std::vector<Poly> g;
    for (const auto& p : c.Ibar.gens()) g.push_back(p.times_monomial(m));
    Ideal rebuilt(c.vars, g);
    if (!c.I.is_rational()) {
        if (rebuilt.gens().size() != c.I.gens().size()) return false;
        for (const auto& p : rebuilt.gens())
            if (std::find(c.I.gens().begin(), c.I.gens().end(), p) == c.I.gens().end()) return false;
        return true;
    }
    return ideal_equal(c.I, rebuilt);
}

bool chart_map_consistent(const MarkedChart& c, const Ideal& root) {
    std::vector<Poly> pulled, expected;
    for (const auto& p : root.gens()) pulled.push_back(substitute(p.embed(c.root_vars), c.chart_map, c.vars));
    for (const auto& p : c.I.gens()) expected.push_back(p * c.total_factor);
    return ideal_equal(Ideal(c.vars, pulled), Ideal(c.vars, expected));
}

}  // namespace rk
