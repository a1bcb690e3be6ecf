#include "resolvekit/resolver.hpp"

#include <algorithm>
#include <functional>
#include <optional>

namespace rk {

namespace {

using Prefix = std::vector<std::pair<Q, int>>;

std::vector<std::string> without(const std::vector<std::string>& v, const std::string& x) {
    std::vector<std::string> r;
    for (const auto& w : v)
        if (w != x) r.push_back(w);
    return r;
}

bool contains(const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

int dimension(const MarkedChart& c) {
    return static_cast<int>(c.derivation_vars().size());
}

Ideal sing_ideal(const MarkedChart& c) {
    return sing_locus(c.I, c.b, c.derivation_vars());
}

bool trivial(const Ideal& I, const MarkedChart& c) {
    return is_trivial(I, c.genericity());
}

Ideal with_vars(const Ideal& I, const std::vector<std::string>& which) {
    return add_generators(I, Ideal::generated_by_vars(I.vars(), which).gens());
}

// Walk the prefix of (omega, n) pairs; the entry of v at that depth, or
// nullptr when v does not start with the prefix.
const RFValue* entry_after(const RFValue& v, const Prefix& prefix) {
    const RFValue* cur = &v;
    for (const auto& [w, n] : prefix) {
        if (cur->kind() != RFValue::Kind::TPair || cur->omega() != w || cur->n() != n) return nullptr;
        cur = &cur->tail();
    }
    return cur;
}

int omega_start(const History& h, const Prefix& prefix, int k, const Q& omega) {
    for (int j = k; j < h.step(); ++j) {
        const RFValue* e = entry_after(h.maxima[static_cast<size_t>(j)], prefix);
        if (e && e->kind() == RFValue::Kind::TPair && e->omega() == omega) return j;
    }
    return h.step();
}

struct OmegaData {
    int b_r = 0;
    Ideal sing;
    Ideal max_omega;
};

OmegaData omega_data(const MarkedChart& c) {
    OmegaData d;
    d.sing = sing_ideal(c);
    if (trivial(d.sing, c)) throw AlgebraError("empty singular locus");
    if (c.Ibar.is_zero()) throw AlgebraError("zero proper transform");
    auto dv = c.derivation_vars();
    Ideal D = c.Ibar;
    for (int m = 1;; ++m) {
        if (m > 1) D = delta(D, 1, dv).tidy();
        Ideal K = ideal_sum(D, d.sing);
        if (trivial(K, c)) break;
        d.b_r = m;
        d.max_omega = K;
        if (m > 10000) throw ResourceError("order of the proper transform did not stabilize");
    }
    return d;
}

}  // namespace

Poly exceptional_monomial(const MarkedChart& c) {
    Poly m = Poly::constant(c.vars, Scalar(1));
    for (const auto& d : c.E) {
        if (d.birth <= c.start) continue;
        auto it = c.a.find(d.birth);
        if (it != c.a.end() && it->second > 0) m = m * Poly::variable(c.vars, d.var).pow(it->second);
    }
    return m;
}

namespace {

void for_each_subset(size_t n, size_t k, const std::function<void(const std::vector<size_t>&)>& f) {
    std::vector<size_t> idx(k);
    for (size_t i = 0; i < k; ++i) idx[i] = i;
    if (k > n) return;
    while (true) {
        f(idx);
        size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

struct GammaResult {
    RFValue value;
    std::vector<std::string> center;
};

GammaResult gamma_of(const MarkedChart& c, const Ideal& sing) {
    std::vector<int> alpha;
    for (const auto& d : c.E) {
        int a = 0;
        if (d.birth > c.start) {
            auto it = c.a.find(d.birth);
            if (it != c.a.end()) a = it->second;
        }
        alpha.push_back(a);
    }
    for (size_t p = 1; p <= c.E.size(); ++p) {
        bool found = false;
        Q best_g2 = 0;
        std::vector<int> best_g3;
        std::vector<std::string> best_center;
        for_each_subset(c.E.size(), p, [&](const std::vector<size_t>& S) {
            int sum = 0;
            std::vector<std::string> vars;
            std::vector<int> ind;
            for (size_t i : S) {
                sum += alpha[i];
                vars.push_back(c.E[i].var);
                ind.push_back(c.E[i].index);
            }
            if (sum < c.b) return;
            if (trivial(with_vars(sing, vars), c)) return;
            std::sort(ind.begin(), ind.end());
            Q g2(sum, c.b);
            g2.canonicalize();
            if (!found || g2 > best_g2 || (g2 == best_g2 && ind > best_g3)) {
                found = true;
                best_g2 = g2;
                best_g3 = ind;
                best_center = vars;
            }
        });
        if (found) return {RFValue::monomial(static_cast<int>(p), best_g2, best_g3, dimension(c)), best_center};
    }
    throw InvariantError("monomial regime without a monomial center: " + c.describe());
}

// Divide out the factors of g that involve only parameters.
Poly strip_param_content(const Poly& g, const std::vector<std::string>& params) {
    if (params.empty() || g.is_zero()) return g;
    std::map<Exp, Poly> groups;
    for (const auto& [e, coef] : g.terms()) {
        Exp fe = e, pe(e.size(), 0);
        for (size_t i = 0; i < e.size(); ++i)
            if (contains(params, g.vars()[i])) {
                pe[i] = e[i];
                fe[i] = 0;
            }
        auto it = groups.find(fe);
        if (it == groups.end()) it = groups.emplace(fe, Poly(g.vars())).first;
        it->second.add_term(pe, coef);
    }
    Poly content;
    bool first = true;
    for (const auto& [fe, p] : groups) {
        content = first ? p : poly_gcd(content, p);
        first = false;
    }
    return exact_quotient(g, content);
}

bool uses_any(const Poly& p, const std::vector<std::string>& vars) {
    for (const auto& v : vars) {
        int k = p.var_index(v);
        if (k >= 0 && p.uses(k)) return true;
    }
    return false;
}

struct Pivot {
    std::string var;
    Poly h;
    Q c;
};

std::optional<Pivot> find_pivot(const Poly& f, const std::vector<std::string>& candidates,
                                const std::vector<std::string>& forbidden, bool exact_only) {
    if (f.is_zero() || f.truncation() >= 0) return std::nullopt;
    for (const auto& v : candidates) {
        int k = f.var_index(v);
        if (k < 0) continue;
        Exp e(f.nvars(), 0);
        e[static_cast<size_t>(k)] = 1;
        auto it = f.terms().find(e);
        if (it == f.terms().end()) continue;
        Q c = it->second.rational();
        Poly h = f - Poly::monomial(f.vars(), e, it->second);
        if (h.uses(k)) continue;
        if ((exact_only || contains(forbidden, v)) && !h.is_zero()) continue;
        return Pivot{v, h, c};
    }
    return std::nullopt;
}

CoordinateChange change_for(const Pivot& p, const std::vector<std::string>& vars, int level) {
    // New coordinate v' = c v + h, i.e. v -> (v - h) / c.
    Poly v = Poly::variable(vars, p.var);
    Poly h = p.h.embed(vars);
    Q inv = 1 / p.c;
    return {level, p.var, (v - h).scaled(Scalar(inv)), v.scaled(Scalar(p.c)) + h};
}

Poly apply_change(const Poly& f, const CoordinateChange& ch) {
    return substitute(f, {{ch.var, ch.image.embed(f.vars())}});
}

Ideal apply_change(const Ideal& I, const CoordinateChange& ch) {
    std::vector<Poly> g;
    for (const auto& p : I.gens()) g.push_back(apply_change(p, ch));
    return Ideal(I.vars(), g);
}

MarkedChart level_object(const MarkedChart& parent, const std::string& z, const Ideal& I, int b,
                         const std::vector<Divisor>& E, int start) {
    MarkedChart c;
    c.vars = without(parent.vars, z);
    c.fiber.names = without(parent.fiber.names, z);
    c.base = parent.base;
    c.generic = parent.generic;
    c.relative = parent.relative;
    c.I = I;
    c.b = b;
    c.E = E;
    c.input_divisors = parent.input_divisors;
    c.start = start;
    c.root_vars = c.vars;
    c.total_factor = Poly::constant(c.vars, Scalar(1));
    refresh_proper(c);
    return c;
}

struct Context {
    const History* history;
    std::vector<std::string> forbidden;  // chart divisor and base variables
    ChartTree* stats;
};

struct LevelResult {
    RFValue value;
    std::vector<std::string> center;
    std::vector<CoordinateChange> changes;
    std::string defect;  // set when the center cannot be made a coordinate subspace
    std::shared_ptr<const LevelNode> chain;
};

struct Piece {
    std::vector<std::string> divisors;
    Ideal locus;
};

struct LevelT {
    OmegaData od;
    Q omega;
    int s = 0;
    int nbar = 0;
    std::vector<Piece> pieces;
    std::vector<Divisor> Eplus;
};

LevelT level_t(const MarkedChart& c, const OmegaData& od, const History& h, const Prefix& prefix) {
    LevelT t;
    t.od = od;
    t.omega = Q(od.b_r, c.b);
    t.omega.canonicalize();
    t.s = omega_start(h, prefix, c.start, t.omega);
    std::vector<const Divisor*> Eminus;
    for (const auto& d : c.E) {
        if (d.birth <= t.s) Eminus.push_back(&d);
        else t.Eplus.push_back(d);
    }
    for (size_t p = Eminus.size() + 1; p-- > 0;) {
        for_each_subset(Eminus.size(), p, [&](const std::vector<size_t>& S) {
            std::vector<std::string> vars;
            for (size_t i : S) vars.push_back(Eminus[i]->var);
            Ideal K = with_vars(od.max_omega, vars);
            if (!trivial(K, c)) t.pieces.push_back({vars, K});
        });
        if (!t.pieces.empty()) {
            t.nbar = static_cast<int>(p);
            break;
        }
    }
    return t;
}

NiceObject build_nice(const MarkedChart& c, const LevelT& t, const Piece& piece, ChartTree* stats) {
    NiceObject n;
    n.level = c;
    n.b_r = t.od.b_r;
    n.nbar = t.nbar;
    n.omega = t.omega;
    n.monomial_factor = exceptional_monomial(c);
    n.piece = piece.divisors;
    n.max_t = piece.locus;
    n.E2 = t.Eplus;
    if (n.b_r >= c.b) {
        n.J = c.Ibar;
        n.b2 = n.b_r;
    } else {
        n.J = ideal_sum(ideal_power(c.Ibar, c.b - n.b_r), Ideal(c.vars, {n.monomial_factor.pow(n.b_r)}));
        n.b2 = n.b_r * (c.b - n.b_r);
    }
    std::vector<Poly> extra;
    for (const auto& v : piece.divisors) extra.push_back(Poly::variable(c.vars, v).pow(n.b2));
    n.I2 = add_generators(n.J, extra).tidy();
    n.sing2 = delta(n.I2, n.b2 - 1, c.derivation_vars()).tidy();
    if (!locus_equal(n.sing2, n.max_t, c.genericity()))
        throw InvariantError("singular locus of the nice object differs from Max(t): " + n.sing2.str() + " vs " +
                             n.max_t.str());
    if (stats) ++stats->nice_checks;
    return n;
}

std::optional<Pivot> search_contact(const NiceObject& n, const std::vector<std::string>& forbidden) {
    std::vector<std::string> cand;
    for (const auto& v : n.level.fiber.names) {
        bool in_e2 = false;
        for (const auto& d : n.E2) in_e2 = in_e2 || d.var == v;
        if (!in_e2) cand.push_back(v);
    }
    const auto& B = n.sing2.basis();
    for (bool exact : {true, false})
        for (const auto& f : B)
            if (auto p = find_pivot(f, cand, forbidden, exact)) return p;
    size_t m = std::min<size_t>(B.size(), 10);
    // Bounded search over combinations with coefficients in {-1, 1}.
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j)
            for (int sj : {1, -1}) {
                Poly f = B[i] + B[j].scaled(Scalar(sj));
                if (auto p = find_pivot(f, cand, forbidden, false)) return p;
                for (size_t k = j + 1; k < m; ++k)
                    for (int sk : {1, -1})
                        if (auto q = find_pivot(f + B[k].scaled(Scalar(sk)), cand, forbidden, false)) return q;
            }
    return std::nullopt;
}

using Chain = std::shared_ptr<const LevelNode>;

LevelResult evaluate_level(const MarkedChart& c, const Prefix& prefix, const Context& ctx, const Chain& stored);

// Codim-one part of a Max(t) piece, aligned to a coordinate.
std::optional<LevelResult> codim_one(const MarkedChart& c, const Piece& piece, const Context& ctx, int level) {
    const auto& B = piece.locus.basis();
    Poly g;
    for (size_t i = 0; i < B.size(); ++i) g = i ? poly_gcd(g, B[i]) : B[i];
    g = strip_param_content(g, c.base.names);
    if (!uses_any(g, c.fiber.names)) return std::nullopt;
    Poly sf = squarefree_part(g);
    std::vector<std::string> forbidden = ctx.forbidden;
    for (const auto& d : c.E) forbidden.push_back(d.var);
    auto p = find_pivot(sf, c.fiber.names, forbidden, false);
    LevelResult r;
    if (!p) {
        r.defect = "non-coordinate center: V(" + sf.str() + ")";
        return r;
    }
    r.center = {p->var};
    if (!p->h.is_zero() || p->c != 1) r.changes.push_back(change_for(*p, c.vars, level));
    return r;
}

// Fresh inductive object for a piece: nice object, maximal contact, descent.
std::shared_ptr<LevelNode> fresh_descent(const MarkedChart& c, const LevelT& t, const Piece& piece,
                                         const Context& ctx, int level, std::vector<CoordinateChange>& changes) {
    NiceObject n = build_nice(c, t, piece, ctx.stats);
    auto p = search_contact(n, ctx.forbidden);
    if (!p) throw AlgebraError("maximal contact not found for " + n.I2.str());
    if (!p->h.is_zero() || p->c != 1) changes.push_back(change_for(*p, c.vars, level));
    Ideal I2 = n.I2, sing2 = n.sing2;
    for (const auto& ch : changes) {
        I2 = apply_change(I2, ch);
        sing2 = apply_change(sing2, ch);
    }
    const std::string& z = p->var;
    auto dv = c.derivation_vars();
    Ideal H = homogenize(I2, n.b2, dv);
    WeightedIdeal C = restricted_coefficient_ideal(H, n.b2, dv, z);
    if (C.ideal.is_zero()) throw InvariantError("coefficient ideal vanishes on the maximal contact hypersurface");
    auto node = std::make_shared<LevelNode>();
    node->obj = level_object(c, z, C.ideal, C.b, n.E2, ctx.history->step());
    node->z = z;
    node->omega = t.omega;
    node->nbar = t.nbar;
    node->piece = piece.divisors;
    node->created = ctx.history->step();
    Ideal lifted = with_vars(sing_ideal(node->obj).embed(c.vars), {z});
    if (!locus_equal(sing2, lifted, c.genericity()))
        throw InvariantError("singular locus changed under descent to V(" + z + ")");
    if (ctx.stats) ++ctx.stats->descent_checks;
    return node;
}

LevelResult evaluate_level(const MarkedChart& c, const Prefix& prefix, const Context& ctx, const Chain& stored) {
    const History& h = *ctx.history;
    int level = static_cast<int>(prefix.size());
    OmegaData od = omega_data(c);
    int dim = dimension(c);
    if (od.b_r == 0) {
        GammaResult g = gamma_of(c, od.sing);
        LevelResult r;
        r.value = g.value;
        r.center = g.center;
        return r;
    }
    LevelT t = level_t(c, od, h, prefix);
    std::optional<LevelResult> best;
    std::vector<LevelResult> ties;
    for (const auto& piece : t.pieces) {
        LevelResult r;
        if (auto one = codim_one(c, piece, ctx, level)) {
            r = *one;
            r.value = RFValue::tpair(t.omega, t.nbar, RFValue::top(dim - 1), dim);
        } else {
            std::shared_ptr<LevelNode> node;
            std::vector<CoordinateChange> changes;
            if (stored && stored->omega == t.omega && stored->nbar == t.nbar && stored->piece == piece.divisors) {
                node = std::make_shared<LevelNode>(*stored);
            } else {
                node = fresh_descent(c, t, piece, ctx, level, changes);
            }
            Prefix next = prefix;
            next.emplace_back(t.omega, t.nbar);
            LevelResult sub = evaluate_level(node->obj, next, ctx, node->child);
            node->child = sub.chain;
            r.value = RFValue::tpair(t.omega, t.nbar, sub.value, dim);
            r.changes = changes;
            r.changes.insert(r.changes.end(), sub.changes.begin(), sub.changes.end());
            r.center = {node->z};
            r.center.insert(r.center.end(), sub.center.begin(), sub.center.end());
            r.defect = sub.defect;
            r.chain = node;
        }
        if (!best || r.value > best->value) {
            best = r;
            ties.clear();
        } else if (r.value == best->value) {
            ties.push_back(r);
        }
    }
    if (!best) throw InvariantError("empty Max(t) locus");
    if (!ties.empty()) best->defect = "maximal value attained on disjoint pieces within one chart";
    return *best;
}

Context make_context(const MarkedChart& c, const History& h, ChartTree* stats) {
    Context ctx{&h, c.divisor_vars(), stats};
    ctx.forbidden.insert(ctx.forbidden.end(), c.base.names.begin(), c.base.names.end());
    return ctx;
}

}  // namespace

std::pair<Q, Ideal> omega_max(const MarkedChart& c) {
    OmegaData od = omega_data(c);
    Q w(od.b_r, c.b);
    w.canonicalize();
    return {w, od.b_r ? od.max_omega : od.sing};
}

TMax t_max(const MarkedChart& c, const History& h) {
    OmegaData od = omega_data(c);
    if (od.b_r == 0) throw AlgebraError("t_max requires max(omega) > 0");
    LevelT t = level_t(c, od, h, {});
    TMax r;
    r.omega = t.omega;
    r.nbar = t.nbar;
    r.s = t.s;
    r.max_omega = od.max_omega;
    std::vector<Ideal> ideals;
    for (const auto& p : t.pieces) {
        r.pieces.push_back(p.divisors);
        ideals.push_back(p.locus);
    }
    r.locus = ideals.front();
    for (size_t i = 1; i < ideals.size(); ++i) r.locus = ideal_intersection(r.locus, ideals[i]);
    return r;
}

std::pair<RFValue, std::vector<std::string>> gamma(const MarkedChart& c) {
    if (!monomial_exponents(c.I, c.divisor_vars(), c.generic ? c.base.names : std::vector<std::string>{}) &&
        omega_data(c).b_r != 0)
        throw AlgebraError("gamma requires a monomial chart");
    Ideal sing = sing_ideal(c);
    if (trivial(sing, c)) throw AlgebraError("empty singular locus");
    GammaResult g = gamma_of(c, sing);
    return {g.value, g.center};
}

NiceObject nice_object(const MarkedChart& c, const History& h) {
    OmegaData od = omega_data(c);
    if (od.b_r == 0) throw AlgebraError("nice object requires max(omega) > 0");
    LevelT t = level_t(c, od, h, {});
    if (t.pieces.empty()) throw InvariantError("empty Max(t) locus");
    size_t pick = 0;
    if (t.pieces.size() > 1) {
        Context ctx = make_context(c, h, nullptr);
        LevelResult r = evaluate_level(c, {}, ctx, nullptr);
        for (size_t i = 0; i < t.pieces.size(); ++i) {
            bool inside = true;
            for (const auto& v : t.pieces[i].divisors) inside = inside && contains(r.center, v);
            if (inside) {
                pick = i;
                break;
            }
        }
    }
    return build_nice(c, t, t.pieces[pick], nullptr);
}

std::pair<std::string, std::vector<CoordinateChange>> maximal_contact(const NiceObject& n,
                                                                      const std::vector<std::string>& forbidden) {
    std::vector<std::string> fb = forbidden;
    for (const auto& d : n.level.E) fb.push_back(d.var);
    fb.insert(fb.end(), n.level.base.names.begin(), n.level.base.names.end());
    auto p = search_contact(n, fb);
    if (!p) throw AlgebraError("maximal contact not found for " + n.I2.str());
    std::vector<CoordinateChange> ch;
    if (!p->h.is_zero() || p->c != 1) ch.push_back(change_for(*p, n.level.vars, 0));
    return {p->var, ch};
}

MarkedChart descend(const NiceObject& n, const std::string& z) {
    auto dv = n.level.derivation_vars();
    Ideal H = homogenize(n.I2, n.b2, dv);
    WeightedIdeal C = restricted_coefficient_ideal(H, n.b2, dv, z);
    return level_object(n.level, z, C.ideal, C.b, n.E2, n.level.start);
}

bool singular(const MarkedChart& c) {
    if (c.I.is_zero()) return true;
    return !trivial(sing_ideal(c), c);
}

Evaluation evaluate(const MarkedChart& c, const History& h, ChartTree* stats,
                    const std::shared_ptr<const LevelNode>& chain) {
    Context ctx = make_context(c, h, stats);
    MarkedChart top = c;
    top.start = 0;
    refresh_proper(top);
    LevelResult r = evaluate_level(top, {}, ctx, chain);
    Evaluation e;
    e.value = r.value;
    e.center = r.center;
    e.changes = r.changes;
    e.monomial = r.value.kind() == RFValue::Kind::Monomial;
    e.defect = r.defect;
    e.chain = r.chain;
    return e;
}

MarkedChart apply_changes(const MarkedChart& c, const std::vector<CoordinateChange>& changes) {
    MarkedChart r = c;
    for (const auto& ch : changes) r = change_coordinates(r, ch.var, ch.image);
    return r;
}

Ideal center_ideal(const std::vector<std::string>& vars, const std::vector<std::string>& center,
                   const std::vector<CoordinateChange>& changes) {
    std::vector<Poly> g;
    for (const auto& v : center) {
        Poly p = Poly::variable(vars, v);
        for (auto it = changes.rbegin(); it != changes.rend(); ++it)
            p = substitute(p, {{it->var, it->inverse.embed(vars)}});
        g.push_back(p);
    }
    return Ideal(vars, g);
}

MarkedChart change_level(const MarkedChart& obj, const std::vector<CoordinateChange>& changes, int level) {
    MarkedChart r = obj;
    for (const auto& ch : changes)
        if (ch.level >= level && contains(r.vars, ch.var)) r = change_coordinates(r, ch.var, ch.image);
    return r;
}

// Transform the stored inductive objects along the blow-up chart of vk.
std::shared_ptr<const LevelNode> transform_chain(const std::shared_ptr<const LevelNode>& n,
                                                 const std::vector<std::string>& parent_center, const std::string& vk,
                                                 int birth, const std::vector<CoordinateChange>& changes, int level) {
    if (!n || vk == n->z) return nullptr;
    std::vector<std::string> center = without(parent_center, n->z);
    if (center.empty()) return nullptr;
    auto out = std::make_shared<LevelNode>(*n);
    MarkedChart obj = change_level(n->obj, changes, level);
    if (center.size() == 1) {
        obj = divide_along(obj, center[0], birth);
    } else {
        auto kids = blowup(obj, center, birth);
        auto it = std::find(center.begin(), center.end(), vk);
        obj = kids[static_cast<size_t>(it - center.begin())];
    }
    out->obj = std::move(obj);
    out->child = transform_chain(n->child, center, vk, birth, changes, level + 1);
    return out;
}

namespace {

enum class Mode { Resolve, Principalize, Embedded };

bool eta_reached(const ChartTree& t) {
    for (int id : t.active)
        if (!strict_transform_nc(t.node(id).chart)) return false;
    return true;
}

void drive(const MarkedChart& root, const Caps& caps, Mode mode, ChartTree& tree) {
    tree = ChartTree{};
    tree.add_root(root);
    History h;
    // Charts untouched by a step keep their value and center.
    std::map<int, std::optional<Evaluation>> cache;
    for (int r = 0;; ++r) {
        if (mode == Mode::Embedded && eta_reached(tree)) {
            tree.stop_reason = "eta";
            return;
        }
        std::optional<RFValue> M;
        for (int id : tree.active) {
            auto& node = tree.nodes[static_cast<size_t>(id)];
            if (!cache.count(id)) {
                if (!singular(node.chart)) {
                    cache[id] = std::nullopt;
                } else {
                    cache[id] = evaluate(node.chart, h, &tree, node.chain);
                    node.value = cache[id]->value;
                }
            }
            const auto& e = cache[id];
            if (e && (!M || e->value > *M)) M = e->value;
        }
        if (!M) {
            tree.stop_reason = "resolved";
            return;
        }
        if (mode == Mode::Principalize && M->kind() == RFValue::Kind::Monomial) {
            tree.stop_reason = "monomial";
            return;
        }
        if (r >= caps.max_steps) throw ResourceError("step cap of " + std::to_string(caps.max_steps) + " exceeded");
        StepRecord rec;
        rec.step = r;
        rec.max = *M;
        rec.regime = M->kind() == RFValue::Kind::Monomial ? StepRecord::MonomialRegime : StepRecord::TRegime;
        rec.tag = "C" + std::to_string(r);
        rec.charts = tree.active;
        std::vector<int> next;
        std::vector<int> current = tree.active;
        for (int id : current) {
            const auto& ev = cache[id];
            if (!ev || ev->value != *M) {
                next.push_back(id);
                continue;
            }
            const Evaluation e = *ev;
            if (!e.defect.empty()) throw AlgebraError(e.defect);
            MarkedChart c = apply_changes(tree.nodes[static_cast<size_t>(id)].chart, e.changes);
            rec.centers.push_back({id, e.center, e.changes, e.center.size() == 1, e.chain});
            tree.nodes[static_cast<size_t>(id)].blown_up = true;
            if (e.center.size() == 1) {
                next.push_back(tree.add_child(id, divide_along(c, e.center[0], r + 1), rec.tag, e.center[0], r + 1));
            } else {
                auto kids = blowup(c, e.center, r + 1);
                for (size_t k = 0; k < kids.size(); ++k) {
                    int kid = tree.add_child(id, std::move(kids[k]), rec.tag, e.center[k], r + 1);
                    tree.nodes[static_cast<size_t>(kid)].chain =
                        transform_chain(e.chain, e.center, e.center[k], r + 1, e.changes, 1);
                    next.push_back(kid);
                }
            }
        }
        h.maxima.push_back(*M);
        tree.steps.push_back(rec);
        tree.active = next;
    }
}

}  // namespace

void resolve_into(const MarkedChart& root, const Caps& caps, ChartTree& out) {
    drive(root, caps, Mode::Resolve, out);
}

ChartTree resolve(const MarkedChart& root, const Caps& caps) {
    ChartTree t;
    drive(root, caps, Mode::Resolve, t);
    return t;
}

ChartTree principalize(const MarkedChart& root, const Caps& caps) {
    MarkedChart c = root;
    c.b = 1;
    refresh_proper(c);
    ChartTree t;
    drive(c, caps, Mode::Principalize, t);
    return t;
}

bool principalized(const ChartTree& t) {
    for (int id : t.active) {
        const MarkedChart& c = t.node(id).chart;
        Ideal total = ideal_product(c.I, Ideal(c.vars, {c.total_factor}));
        if (!monomial_exponents(total, c.divisor_vars(), c.generic ? c.base.names : std::vector<std::string>{}))
            return false;
    }
    return true;
}

bool strict_transform_nc(const MarkedChart& c) {
    if (c.Ibar.gens().size() != 1) throw AlgebraError("embedded resolution expects a principal ideal");
    const Poly f = c.Ibar.gens()[0];
    auto dv = c.derivation_vars();
    size_t m = c.E.size();
    for (size_t mask = 0; mask < (size_t{1} << m); ++mask) {
        std::map<std::string, Poly> zero;
        std::vector<std::string> rest = dv;
        std::vector<Poly> gens;
        for (size_t i = 0; i < m; ++i)
            if (mask & (size_t{1} << i)) {
                zero[c.E[i].var] = Poly(c.vars);
                rest = without(rest, c.E[i].var);
                gens.push_back(Poly::variable(c.vars, c.E[i].var));
            }
        Poly g = substitute(f, zero);
        if (g.is_zero()) return false;
        gens.push_back(g);
        for (const auto& v : rest) gens.push_back(partial_derivative(g, v));
        if (!is_trivial(Ideal(c.vars, gens), c.genericity())) return false;
    }
    return true;
}

ChartTree resolve_embedded(const Ideal& X, const MarkedChart& ambient, const Caps& caps) {
    if (X.gens().size() != 1) throw AlgebraError("embedded resolution expects a principal ideal");
    MarkedChart c = ambient;
    c.I = X.embed(ambient.vars);
    c.b = 1;
    refresh_proper(c);
    ChartTree t;
    drive(c, caps, Mode::Embedded, t);
    return t;
}

bool regime_transition(const RFValue& a, const RFValue& b) {
    const RFValue* x = &a;
    const RFValue* y = &b;
    while (x->kind() == RFValue::Kind::TPair && y->kind() == RFValue::Kind::TPair) {
        if (x->omega() != y->omega() || x->n() != y->n()) return false;
        x = &x->tail();
        y = &y->tail();
    }
    auto t = RFValue::Kind::TPair;
    auto m = RFValue::Kind::Monomial;
    return (x->kind() == t && y->kind() == m) || (x->kind() == m && y->kind() == t);
}

std::vector<int> monotonicity_violations(const ChartTree& t) {
    std::vector<int> bad;
    for (size_t j = 0; j + 1 < t.steps.size(); ++j) {
        const auto& a = t.steps[j].max;
        const auto& b = t.steps[j + 1].max;
        if (regime_transition(a, b)) continue;
        if (!(b < a)) bad.push_back(static_cast<int>(j));
    }
    return bad;
}

std::vector<int> regime_transitions(const ChartTree& t) {
    std::vector<int> r;
    for (size_t j = 0; j + 1 < t.steps.size(); ++j)
        if (regime_transition(t.steps[j].max, t.steps[j + 1].max)) r.push_back(static_cast<int>(j));
    return r;
}

}  // namespace rk
