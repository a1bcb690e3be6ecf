#include "resolvekit/poly.hpp"

#include <algorithm>
#include <sstream>

namespace rk {

bool VarSet::contains(const std::string& v) const {
    return std::find(names.begin(), names.end(), v) != names.end();
}

Poly::Poly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

Poly Poly::constant(const std::vector<std::string>& vars, const Scalar& c) {
    Poly p(vars);
    p.add_term(Exp(vars.size(), 0), c);
    return p;
}

Poly Poly::variable(const std::vector<std::string>& vars, const std::string& name) {
    Poly p(vars);
    int i = p.var_index(name);
    if (i < 0) throw AlgebraError("unknown variable '" + name + "'");
    Exp e(vars.size(), 0);
    e[static_cast<size_t>(i)] = 1;
    p.add_term(e, Scalar(1));
    return p;
}

Poly Poly::monomial(const std::vector<std::string>& vars, const Exp& e, const Scalar& c) {
    Poly p(vars);
    p.add_term(e, c);
    return p;
}

int Poly::var_index(const std::string& name) const {
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return static_cast<int>(i);
    return -1;
}

bool Poly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    for (int x : terms_.begin()->first)
        if (x != 0) return false;
    return true;
}

Scalar Poly::constant_term() const {
    auto it = terms_.find(Exp(vars_.size(), 0));
    return it == terms_.end() ? Scalar(0) : it->second;
}

int Poly::total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (int x : e) s += x;
        d = std::max(d, s);
    }
    return d;
}

int Poly::min_degree() const {
    int d = kInfinity;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (int x : e) s += x;
        d = std::min(d, s);
    }
    return d;
}

int Poly::degree_in(int idx) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e[static_cast<size_t>(idx)]);
    return d;
}

bool Poly::uses(int idx) const {
    for (const auto& [e, c] : terms_)
        if (e[static_cast<size_t>(idx)] != 0) return true;
    return false;
}

int Poly::truncation() const {
    for (const auto& [e, c] : terms_)
        if (c.is_truncated()) return c.order();
    return -1;
}

void Poly::add_term(const Exp& e, const Scalar& c) {
    if (e.size() != vars_.size()) throw AlgebraError("exponent length does not match ring");
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

void Poly::check_ring(const Poly& o) const {
    if (vars_ != o.vars_) throw AlgebraError("polynomials live in different rings");
}

Poly Poly::operator+(const Poly& o) const {
    check_ring(o);
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    check_ring(o);
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    check_ring(o);
    Poly r(vars_);
    Exp e(vars_.size());
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            for (size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
            r.add_term(e, c1 * c2);
        }
    return r;
}

Poly Poly::operator-() const {
    Poly r(vars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Poly Poly::scaled(const Scalar& c) const {
    Poly r(vars_);
    for (const auto& [e, a] : terms_) r.add_term(e, a * c);
    return r;
}

Poly Poly::pow(int k) const {
    if (k < 0) throw AlgebraError("negative power");
    Poly result = constant(vars_, Scalar(1));
    Poly base = *this;
    while (k > 0) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

Poly Poly::times_monomial(const Exp& m) const {
    Poly r(vars_);
    for (const auto& [e, c] : terms_) {
        Exp f = e;
        for (size_t i = 0; i < f.size(); ++i) f[i] += m[i];
        r.terms_.emplace(std::move(f), c);
    }
    return r;
}

Poly Poly::embed(const std::vector<std::string>& new_vars) const {
    if (new_vars == vars_) return *this;
    std::vector<int> where(vars_.size(), -1);
    for (size_t i = 0; i < vars_.size(); ++i)
        for (size_t j = 0; j < new_vars.size(); ++j)
            if (vars_[i] == new_vars[j]) where[i] = static_cast<int>(j);
    Poly r(new_vars);
    for (const auto& [e, c] : terms_) {
        Exp f(new_vars.size(), 0);
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (where[i] < 0) throw AlgebraError("variable '" + vars_[i] + "' missing from target ring");
            f[static_cast<size_t>(where[i])] = e[i];
        }
        r.add_term(f, c);
    }
    return r;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Highest total degree first, then reverse lexicographic map order.
    std::vector<std::pair<Exp, Scalar>> ts(terms_.begin(), terms_.end());
    std::stable_sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
        int da = 0, db = 0;
        for (int x : a.first) da += x;
        for (int x : b.first) db += x;
        if (da != db) return da > db;
        return a.first > b.first;
    });
    for (const auto& [e, c] : ts) {
        bool mono = false;
        for (int x : e) mono |= (x != 0);
        std::string coeff;
        bool negative = false;
        if (c.is_rational()) {
            negative = c.rational() < 0;
            Q a = abs(c.rational());
            if (!(mono && a == 1)) coeff = q_str(a);
        } else {
            coeff = c.str();
        }
        if (first) os << (negative ? "-" : "");
        else os << (negative ? " - " : " + ");
        first = false;
        bool need_star = false;
        if (!coeff.empty()) {
            os << coeff;
            need_star = true;
        }
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (need_star) os << "*";
            os << vars_[i];
            if (e[i] > 1) os << "^" << e[i];
            need_star = true;
        }
    }
    return os.str();
}

Poly partial_derivative(const Poly& p, const std::string& v) {
    int i = p.var_index(v);
    if (i < 0) throw AlgebraError("unknown variable '" + v + "'");
    Poly r(p.vars());
    for (const auto& [e, c] : p.terms()) {
        int k = e[static_cast<size_t>(i)];
        if (k == 0) continue;
        Exp f = e;
        f[static_cast<size_t>(i)] = k - 1;
        r.add_term(f, c * Scalar(k));
    }
    return r;
}

Poly substitute(const Poly& p, const std::map<std::string, Poly>& bindings,
                const std::vector<std::string>& target_vars) {
    const auto& vars = p.vars();
    std::vector<Poly> images;
    images.reserve(vars.size());
    for (const auto& v : vars) {
        auto it = bindings.find(v);
        if (it != bindings.end()) {
            if (it->second.truncation() >= 0 && p.truncation() >= 0 &&
                it->second.truncation() != p.truncation())
                throw AlgebraError("substitution mixes truncation orders");
            images.push_back(it->second.embed(target_vars));
        } else {
            bool present = std::find(target_vars.begin(), target_vars.end(), v) != target_vars.end();
            images.push_back(present ? Poly::variable(target_vars, v) : Poly(target_vars));
            if (!present) {
                int idx = p.var_index(v);
                if (p.uses(idx)) throw AlgebraError("variable '" + v + "' has no image in target ring");
            }
        }
    }
    // Cache powers per variable.
    std::vector<std::vector<Poly>> powers(vars.size());
    auto power = [&](size_t i, int k) -> const Poly& {
        auto& cache = powers[i];
        if (cache.empty()) cache.push_back(Poly::constant(target_vars, Scalar(1)));
        while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * images[i]);
        return cache[static_cast<size_t>(k)];
    };
    Poly r(target_vars);
    for (const auto& [e, c] : p.terms()) {
        Poly term = Poly::constant(target_vars, c);
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) term = term * power(i, e[i]);
        r += term;
    }
    return r;
}

Poly substitute(const Poly& p, const std::map<std::string, Poly>& bindings) {
    return substitute(p, bindings, p.vars());
}

namespace {
int order_impl(const Poly& p, const std::vector<std::string>& center_vars, bool strict) {
    if (center_vars.empty()) throw AlgebraError("empty center");
    std::vector<size_t> idx;
    for (const auto& v : center_vars) {
        int i = p.var_index(v);
        if (i < 0) throw AlgebraError("unknown variable '" + v + "'");
        idx.push_back(static_cast<size_t>(i));
    }
    int best = kInfinity;
    for (const auto& [e, c] : p.terms()) {
        if (strict && !c.is_unit()) continue;
        int d = 0;
        for (size_t i : idx) d += e[i];
        best = std::min(best, d);
    }
    return best;
}
}  // namespace

int order_along(const Poly& p, const std::vector<std::string>& center_vars) {
    return order_impl(p, center_vars, false);
}

int order_along_strict(const Poly& p, const std::vector<std::string>& center_vars) {
    return order_impl(p, center_vars, true);
}

Poly divide_by_monomial(const Poly& p, const Exp& m) {
    Poly r(p.vars());
    for (const auto& [e, c] : p.terms()) {
        Exp f = e;
        for (size_t i = 0; i < f.size(); ++i) {
            f[i] -= m[i];
            if (f[i] < 0) throw AlgebraError("monomial does not divide polynomial");
        }
        r.add_term(f, c);
    }
    return r;
}

Poly restrict_var(const Poly& p, const std::string& v) {
    int i = p.var_index(v);
    if (i < 0) throw AlgebraError("unknown variable '" + v + "'");
    std::vector<std::string> nv;
    for (const auto& w : p.vars())
        if (w != v) nv.push_back(w);
    Poly r(nv);
    for (const auto& [e, c] : p.terms()) {
        if (e[static_cast<size_t>(i)] != 0) continue;
        Exp f;
        f.reserve(nv.size());
        for (size_t j = 0; j < e.size(); ++j)
            if (static_cast<int>(j) != i) f.push_back(e[j]);
        r.add_term(f, c);
    }
    return r;
}

std::vector<std::string> union_vars(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> r = a;
    for (const auto& v : b)
        if (std::find(r.begin(), r.end(), v) == r.end()) r.push_back(v);
    return r;
}

}  // namespace rk
