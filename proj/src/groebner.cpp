#include "resolvekit/groebner.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>

namespace rk {

namespace {

std::atomic<long> g_step_cap{100000};

int degree(const Exp& e) {
    int s = 0;
    for (int x : e) s += x;
    return s;
}

int drl(const Exp& a, const Exp& b, size_t lo, size_t hi) {
    int da = 0, db = 0;
    for (size_t i = lo; i < hi; ++i) {
        da += a[i];
        db += b[i];
    }
    if (da != db) return da < db ? -1 : 1;
    for (size_t i = hi; i-- > lo;) {
        if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
    }
    return 0;
}

struct Term {
    Exp e;
    Q c;
};
using GPoly = std::vector<Term>;

struct Desc {
    const MonomialOrder* order;
    bool operator()(const Exp& a, const Exp& b) const { return order->compare(a, b) > 0; }
};

GPoly to_gpoly(const Poly& p, const MonomialOrder& order) {
    GPoly g;
    g.reserve(p.terms().size());
    for (const auto& [e, c] : p.terms()) g.push_back({e, c.rational()});
    std::sort(g.begin(), g.end(), [&](const Term& a, const Term& b) { return order.compare(a.e, b.e) > 0; });
    return g;
}

Poly from_gpoly(const GPoly& g, const std::vector<std::string>& vars) {
    Poly p(vars);
    for (const auto& t : g) p.add_term(t.e, Scalar(t.c));
    return p;
}

void make_monic(GPoly& g) {
    if (g.empty() || g[0].c == 1) return;
    Q inv = 1 / g[0].c;
    for (auto& t : g) t.c *= inv;
}

bool divides(const Exp& a, const Exp& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Exp lcm(const Exp& a, const Exp& b) {
    Exp r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

bool coprime(const Exp& a, const Exp& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] && b[i]) return false;
    return true;
}

// Full reduction of f by the monic polynomials in `basis`.
GPoly reduce(const GPoly& f, const std::vector<GPoly>& basis, const MonomialOrder& order,
             const std::vector<bool>* active = nullptr) {
    std::map<Exp, Q, Desc> work(Desc{&order});
    for (const auto& t : f) work.emplace(t.e, t.c);
    GPoly rem;
    Exp m;
    while (!work.empty()) {
        auto it = work.begin();
        const GPoly* div = nullptr;
        for (size_t k = 0; k < basis.size(); ++k) {
            if (active && !(*active)[k]) continue;
            if (!basis[k].empty() && divides(basis[k][0].e, it->first)) {
                div = &basis[k];
                break;
            }
        }
        if (!div) {
            rem.push_back({it->first, it->second});
            work.erase(it);
            continue;
        }
        Q q = it->second;
        m = it->first;
        for (size_t i = 0; i < m.size(); ++i) m[i] -= (*div)[0].e[i];
        work.erase(it);
        for (size_t j = 1; j < div->size(); ++j) {
            Exp key = (*div)[j].e;
            for (size_t i = 0; i < key.size(); ++i) key[i] += m[i];
            auto [pos, inserted] = work.try_emplace(std::move(key), 0);
            pos->second -= q * (*div)[j].c;
            if (pos->second == 0) work.erase(pos);
        }
    }
    return rem;
}

GPoly spoly(const GPoly& f, const GPoly& g, const MonomialOrder& order) {
    Exp l = lcm(f[0].e, g[0].e);
    std::map<Exp, Q, Desc> work(Desc{&order});
    auto add = [&](const GPoly& p, const Q& s) {
        Exp m = l;
        for (size_t i = 0; i < m.size(); ++i) m[i] -= p[0].e[i];
        for (size_t j = 1; j < p.size(); ++j) {
            Exp key = p[j].e;
            for (size_t i = 0; i < key.size(); ++i) key[i] += m[i];
            auto [pos, inserted] = work.try_emplace(std::move(key), 0);
            pos->second += s * p[j].c;
            if (pos->second == 0) work.erase(pos);
        }
    };
    add(f, Q(1));
    add(g, Q(-1));
    GPoly r;
    r.reserve(work.size());
    for (auto& [e, c] : work) r.push_back({e, c});
    return r;
}

}  // namespace

int MonomialOrder::compare(const Exp& a, const Exp& b) const {
    switch (kind) {
        case Lex:
            for (size_t i = 0; i < a.size(); ++i)
                if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
            return 0;
        case Block: {
            size_t k = std::min(static_cast<size_t>(block), a.size());
            int c = drl(a, b, 0, k);
            if (c) return c;
            return drl(a, b, k, a.size());
        }
        default:
            return drl(a, b, 0, a.size());
    }
}

void set_groebner_step_cap(long cap) { g_step_cap = cap; }
long groebner_step_cap() { return g_step_cap; }

Exp leading_exp(const Poly& p, const MonomialOrder& order) {
    if (p.is_zero()) throw AlgebraError("leading term of zero polynomial");
    const Exp* best = nullptr;
    for (const auto& [e, c] : p.terms())
        if (!best || order.compare(e, *best) > 0) best = &e;
    return *best;
}

std::vector<Poly> groebner_basis(const std::vector<Poly>& gens, const std::vector<std::string>& vars,
                                 const MonomialOrder& order) {
    std::vector<GPoly> G;
    for (const auto& p : gens) {
        if (p.vars() != vars) throw AlgebraError("generator outside the ideal's ring");
        if (p.is_zero()) continue;
        GPoly g = to_gpoly(p, order);
        make_monic(g);
        if (degree(g[0].e) == 0) return {Poly::constant(vars, Scalar(1))};
        G.push_back(std::move(g));
    }
    if (G.empty()) return {};

    // Inter-reduce the input once so pairs start from a tidy set.
    std::sort(G.begin(), G.end(), [&](const GPoly& a, const GPoly& b) { return order.compare(a[0].e, b[0].e) < 0; });
    {
        std::vector<GPoly> H;
        for (auto& g : G) {
            GPoly r = reduce(g, H, order);
            if (r.empty()) continue;
            make_monic(r);
            if (degree(r[0].e) == 0) return {Poly::constant(vars, Scalar(1))};
            H.push_back(std::move(r));
        }
        G = std::move(H);
    }

    struct Pair {
        size_t i, j;
        Exp l;
        int deg;
    };
    auto pair_less = [&](const Pair& a, const Pair& b) {
        if (a.deg != b.deg) return a.deg < b.deg;
        int c = order.compare(a.l, b.l);
        if (c) return c < 0;
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    };
    std::set<Pair, decltype(pair_less)> queue(pair_less);
    std::set<std::pair<size_t, size_t>> pending;
    auto add_pairs = [&](size_t j) {
        for (size_t i = 0; i < j; ++i) {
            Exp l = lcm(G[i][0].e, G[j][0].e);
            int d = degree(l);
            queue.insert({i, j, std::move(l), d});
            pending.insert({i, j});
        }
    };
    for (size_t j = 1; j < G.size(); ++j) add_pairs(j);

    long steps = 0;
    const long cap = g_step_cap;
    while (!queue.empty()) {
        Pair pr = *queue.begin();
        queue.erase(queue.begin());
        pending.erase({pr.i, pr.j});
        if (coprime(G[pr.i][0].e, G[pr.j][0].e)) continue;
        bool chain = false;
        for (size_t k = 0; k < G.size() && !chain; ++k) {
            if (k == pr.i || k == pr.j) continue;
            if (!divides(G[k][0].e, pr.l)) continue;
            auto key = [](size_t a, size_t b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); };
            if (!pending.count(key(pr.i, k)) && !pending.count(key(pr.j, k))) chain = true;
        }
        if (chain) continue;
        if (++steps > cap) throw ResourceError("Groebner step cap exceeded");
        GPoly s = spoly(G[pr.i], G[pr.j], order);
        GPoly r = reduce(s, G, order);
        if (r.empty()) continue;
        make_monic(r);
        if (degree(r[0].e) == 0) return {Poly::constant(vars, Scalar(1))};
        G.push_back(std::move(r));
        add_pairs(G.size() - 1);
    }

    // Minimal basis, then full inter-reduction.
    std::vector<bool> keep(G.size(), true);
    for (size_t i = 0; i < G.size(); ++i) {
        for (size_t j = 0; j < G.size() && keep[i]; ++j) {
            if (i == j || !keep[j]) continue;
            if (divides(G[j][0].e, G[i][0].e) && (G[j][0].e != G[i][0].e || j < i)) keep[i] = false;
        }
    }
    std::vector<GPoly> M;
    for (size_t i = 0; i < G.size(); ++i)
        if (keep[i]) M.push_back(G[i]);
    std::vector<GPoly> R(M.size());
    for (size_t i = 0; i < M.size(); ++i) {
        std::vector<bool> active(M.size(), true);
        active[i] = false;
        GPoly tail(M[i].begin() + 1, M[i].end());
        GPoly red = reduce(tail, M, order, &active);
        R[i].push_back(M[i][0]);
        R[i].insert(R[i].end(), red.begin(), red.end());
    }
    std::sort(R.begin(), R.end(), [&](const GPoly& a, const GPoly& b) { return order.compare(a[0].e, b[0].e) < 0; });
    std::vector<Poly> out;
    out.reserve(R.size());
    for (const auto& g : R) out.push_back(from_gpoly(g, vars));
    return out;
}

Poly normal_form(const Poly& f, const std::vector<Poly>& basis, const MonomialOrder& order) {
    std::vector<GPoly> B;
    for (const auto& b : basis) {
        GPoly g = to_gpoly(b, order);
        make_monic(g);
        B.push_back(std::move(g));
    }
    return from_gpoly(reduce(to_gpoly(f, order), B, order), f.vars());
}

std::pair<Poly, Poly> divide(const Poly& f, const Poly& g, const MonomialOrder& order) {
    if (g.is_zero()) throw AlgebraError("division by zero polynomial");
    GPoly G = to_gpoly(g, order);
    std::map<Exp, Q, Desc> work(Desc{&order});
    for (const auto& [e, c] : f.terms()) work.emplace(e, c.rational());
    Poly quot(f.vars()), rem(f.vars());
    while (!work.empty()) {
        auto it = work.begin();
        if (!divides(G[0].e, it->first)) {
            rem.add_term(it->first, Scalar(it->second));
            work.erase(it);
            continue;
        }
        Q q = it->second / G[0].c;
        Exp m = it->first;
        for (size_t i = 0; i < m.size(); ++i) m[i] -= G[0].e[i];
        quot.add_term(m, Scalar(q));
        work.erase(it);
        for (size_t j = 1; j < G.size(); ++j) {
            Exp key = G[j].e;
            for (size_t i = 0; i < key.size(); ++i) key[i] += m[i];
            auto [pos, inserted] = work.try_emplace(std::move(key), 0);
            pos->second -= q * G[j].c;
            if (pos->second == 0) work.erase(pos);
        }
    }
    return {quot, rem};
}

}  // namespace rk
