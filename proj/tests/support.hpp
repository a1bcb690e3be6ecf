// Shared helpers for the test binaries: random inputs and small oracles.
#pragma once

#include "resolvekit/chart.hpp"
#include "resolvekit/ideal.hpp"
#include "resolvekit/parse.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace rktest {

using rk::Exp;
using rk::Ideal;
using rk::Poly;
using rk::Q;

inline Poly P(const std::string& s, const std::vector<std::string>& vars) { return rk::parse_poly(s, vars); }

inline Ideal I(const std::vector<std::string>& vars, const std::vector<std::string>& gens) {
    std::vector<Poly> g;
    for (const auto& s : gens) g.push_back(P(s, vars));
    return Ideal(vars, g);
}

// Random polynomial with small integer coefficients.
inline Poly random_poly(std::mt19937& rng, const std::vector<std::string>& vars, int max_deg, int terms,
                        int min_deg = 0) {
    std::uniform_int_distribution<int> coef(-3, 3), deg(min_deg, max_deg);
    Poly p(vars);
    for (int k = 0; k < terms; ++k) {
        int d = deg(rng);
        Exp e(vars.size(), 0);
        for (int i = 0; i < d; ++i) e[std::uniform_int_distribution<size_t>(0, vars.size() - 1)(rng)]++;
        int c = coef(rng);
        if (c != 0) p.add_term(e, rk::Scalar(c));
    }
    return p;
}

// Value at a rational point; every coefficient must be rational.
inline Q eval(const Poly& p, const std::map<std::string, Q>& at) {
    Q r = 0;
    for (const auto& [e, c] : p.terms()) {
        Q m = c.rational();
        for (size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) m *= at.at(p.vars()[i]);
        r += m;
    }
    return r;
}

inline std::map<std::string, Q> random_point(std::mt19937& rng, const std::vector<std::string>& vars) {
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    std::map<std::string, Q> r;
    for (const auto& v : vars) {
        Q q(num(rng), den(rng));
        q.canonicalize();
        r[v] = q;
    }
    return r;
}

// Order of vanishing of f at a point, from the Taylor expansion obtained by
// translating the point to the origin.
inline int order_at(const Poly& f, const std::map<std::string, Q>& at) {
    if (f.is_zero()) return rk::kInfinity;
    std::map<std::string, Poly> shift;
    for (const auto& v : f.vars())
        shift[v] = Poly::variable(f.vars(), v) + Poly::constant(f.vars(), rk::Scalar(at.at(v)));
    return rk::substitute(f, shift).min_degree();
}

// Largest m with every generator of order >= m at the point, i.e. the
// order of the ideal there.
inline int ideal_order_at(const Ideal& J, const std::map<std::string, Q>& at) {
    int m = rk::kInfinity;
    for (const auto& g : J.gens()) m = std::min(m, order_at(g, at));
    return m;
}

}  // namespace rktest
