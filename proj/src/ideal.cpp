#include "resolvekit/ideal.hpp"

#include <algorithm>

namespace rk {

namespace {
const char* kAux = "__aux";

std::vector<std::string> with_aux(const std::vector<std::string>& vars) {
    std::vector<std::string> v = vars;
    v.push_back(kAux);
    return v;
}
}  // namespace

Ideal::Ideal(std::vector<std::string> vars, std::vector<Poly> gens)
    : vars_(std::move(vars)), memo_(std::make_shared<Memo>()) {
    for (auto& g : gens) {
        if (g.is_zero()) continue;
        if (g.vars() != vars_) g = g.embed(vars_);
        bool dup = false;
        for (const auto& h : gens_)
            if (h == g) dup = true;
        if (!dup) gens_.push_back(std::move(g));
    }
}

Ideal Ideal::unit(const std::vector<std::string>& vars) {
    return Ideal(vars, {Poly::constant(vars, Scalar(1))});
}

Ideal Ideal::generated_by_vars(const std::vector<std::string>& vars, const std::vector<std::string>& which) {
    std::vector<Poly> g;
    for (const auto& w : which) g.push_back(Poly::variable(vars, w));
    return Ideal(vars, g);
}

bool Ideal::is_rational() const {
    for (const auto& g : gens_)
        if (g.truncation() >= 0) return false;
    return true;
}

const std::vector<Poly>& Ideal::basis(const MonomialOrder& order) const {
    std::lock_guard<std::mutex> lock(memo_->mu);
    auto it = memo_->bases.find(order);
    if (it != memo_->bases.end()) return it->second;
    if (!is_rational()) throw AlgebraError("Groebner bases are only computed over Q");
    auto b = groebner_basis(gens_, vars_, order);
    return memo_->bases.emplace(order, std::move(b)).first->second;
}

Ideal Ideal::tidy() const {
    if (!is_rational()) return *this;
    Ideal J(vars_, basis());
    {
        std::lock_guard<std::mutex> lock(J.memo_->mu);
        J.memo_->bases.emplace(MonomialOrder::degrevlex(), J.gens_);
    }
    return J;
}

Ideal Ideal::embed(const std::vector<std::string>& new_vars) const {
    std::vector<Poly> g;
    for (const auto& p : gens_) g.push_back(p.embed(new_vars));
    return Ideal(new_vars, g);
}

std::string Ideal::str() const {
    std::string s = "(";
    for (size_t i = 0; i < gens_.size(); ++i) {
        if (i) s += ", ";
        s += gens_[i].str();
    }
    if (gens_.empty()) s += "0";
    return s + ")";
}

std::vector<Poly> groebner(const Ideal& I, const MonomialOrder& order) {
    return I.basis(order);
}

bool is_trivial(const Ideal& I) {
    if (I.is_zero()) return false;
    for (const auto& g : I.gens())
        if (g.is_constant() && g.constant_term().is_unit()) return true;
    if (!I.is_rational()) {
        throw AlgebraError("triviality over truncated coefficients is not decided by Groebner bases");
    }
    const auto& b = I.basis();
    return b.size() == 1 && b[0].is_constant();
}

bool member(const Poly& f, const Ideal& I) {
    if (f.is_zero()) return true;
    if (I.is_zero()) return false;
    return normal_form(f.embed(I.vars()), I.basis(), MonomialOrder::degrevlex()).is_zero();
}

bool radical_member(const Poly& f, const Ideal& I) {
    return radical_member(f, I, Genericity{});
}

bool ideal_contains(const Ideal& I, const Ideal& J) {
    for (const auto& g : J.gens())
        if (!member(g, I)) return false;
    return true;
}

bool ideal_equal(const Ideal& I, const Ideal& J) {
    if (I.vars() != J.vars()) return ideal_equal(I, J.embed(I.vars()));
    if (I.is_zero() || J.is_zero()) return I.is_zero() && J.is_zero();
    return I.basis() == J.basis();
}

bool locus_contained(const Ideal& I, const Ideal& J) {
    return locus_contained(I, J, Genericity{});
}

bool locus_equal(const Ideal& I, const Ideal& J) {
    return locus_equal(I, J, Genericity{});
}

Ideal ideal_sum(const Ideal& I, const Ideal& J) {
    std::vector<Poly> g = I.gens();
    for (const auto& p : J.gens()) g.push_back(p.embed(I.vars()));
    return Ideal(I.vars(), g);
}

Ideal add_generators(const Ideal& I, const std::vector<Poly>& extra) {
    std::vector<Poly> g = I.gens();
    g.insert(g.end(), extra.begin(), extra.end());
    return Ideal(I.vars(), g);
}

Ideal ideal_product(const Ideal& I, const Ideal& J) {
    const auto& a = I.is_rational() ? I.basis() : I.gens();
    const auto& b = J.is_rational() ? J.basis() : J.gens();
    std::vector<Poly> g;
    for (const auto& p : a)
        for (const auto& q : b) g.push_back(p * q.embed(I.vars()));
    return Ideal(I.vars(), g).tidy();
}

Ideal ideal_power(const Ideal& I, int k) {
    if (k < 0) throw AlgebraError("negative ideal power");
    Ideal result = Ideal::unit(I.vars());
    Ideal base = I.tidy();
    while (k > 0) {
        if (k & 1) result = ideal_product(result, base);
        k >>= 1;
        if (k) base = ideal_product(base, base);
    }
    return result;
}

Ideal ideal_intersection(const Ideal& I, const Ideal& J) {
    // I ∩ J = (u I + (1-u) J) ∩ Q[vars].
    std::vector<std::string> v = {kAux};
    v.insert(v.end(), I.vars().begin(), I.vars().end());
    Poly u = Poly::variable(v, kAux);
    Poly one_minus_u = Poly::constant(v, Scalar(1)) - u;
    std::vector<Poly> g;
    for (const auto& p : I.gens()) g.push_back(u * p.embed(v));
    for (const auto& p : J.gens()) g.push_back(one_minus_u * p.embed(v));
    return eliminate(Ideal(v, g), {kAux});
}

Ideal delta(const Ideal& I, int k, const std::vector<std::string>& derivation_vars) {
    if (k < 0) throw AlgebraError("negative Delta exponent");
    Ideal J = I;
    for (int step = 0; step < k; ++step) {
        if (J.is_zero()) return J;
        bool rational = J.is_rational();
        if (rational && is_trivial(J)) return Ideal::unit(I.vars());
        std::vector<Poly> g = rational ? J.basis() : J.gens();
        std::vector<Poly> all = g;
        for (const auto& p : g)
            for (const auto& v : derivation_vars) all.push_back(partial_derivative(p, v));
        J = Ideal(I.vars(), all);
    }
    return J;
}

Ideal sing_locus(const Ideal& I, int b, const std::vector<std::string>& derivation_vars) {
    if (b < 1) throw AlgebraError("mark must be positive");
    return delta(I, b - 1, derivation_vars);
}

int max_order(const Ideal& I, const std::vector<std::string>& derivation_vars) {
    return max_order(I, derivation_vars, Genericity{});
}

int max_order(const Ideal& I, const std::vector<std::string>& derivation_vars, const Genericity& g) {
    if (I.is_zero()) throw AlgebraError("max_order of the zero ideal");
    if (is_trivial(I, g)) return 0;
    Ideal J = I;
    for (int m = 1;; ++m) {
        J = delta(J, 1, derivation_vars);
        if (is_trivial(J, g)) return m;
        if (m > 100000) throw ResourceError("max_order did not stabilize");
    }
}

namespace {
long factorial(int b) {
    long f = 1;
    for (int i = 2; i <= b; ++i) f *= i;
    return f;
}
}  // namespace

WeightedIdeal coefficient_ideal(const Ideal& I, int b, const std::vector<std::string>& derivation_vars) {
    if (b < 1) throw AlgebraError("mark must be positive");
    if (b == 1) return {I, 1};
    if (b > 8) throw ResourceError("coefficient ideal mark too large");
    long fact = factorial(b);
    Ideal D = I;
    Ideal C(I.vars(), {});
    for (int i = 0; i < b; ++i) {
        if (i > 0) D = delta(D, 1, derivation_vars).tidy();
        C = ideal_sum(C, ideal_power(D, static_cast<int>(fact / (b - i))));
    }
    return {C.tidy(), static_cast<int>(fact)};
}

WeightedIdeal restricted_coefficient_ideal(const Ideal& I, int b, const std::vector<std::string>& derivation_vars,
                                           const std::string& z) {
    if (b < 1) throw AlgebraError("mark must be positive");
    if (b > 12) throw ResourceError("coefficient ideal mark too large");
    long fact = factorial(b);
    Ideal D = I;
    Ideal C;
    for (int i = 0; i < b; ++i) {
        if (i > 0) D = delta(D, 1, derivation_vars).tidy();
        Ideal R = restrict_to_hyperplane(D, z);
        if (i == 0) C = Ideal(R.vars(), {});
        if (R.is_zero()) continue;
        C = ideal_sum(C, ideal_power(R, static_cast<int>(fact / (b - i))));
    }
    return {C.is_zero() ? C : C.tidy(), static_cast<int>(fact)};
}

Ideal homogenize(const Ideal& I, int b, const std::vector<std::string>& derivation_vars) {
    if (b < 1) throw AlgebraError("mark must be positive");
    if (b == 1) return I;
    std::vector<Ideal> D{I};
    for (int i = 1; i < b; ++i) D.push_back(delta(D.back(), 1, derivation_vars).tidy());
    const Ideal& T = D.back();
    Ideal H = I;
    Ideal Tpow = Ideal::unit(I.vars());
    for (int i = 1; i < b; ++i) {
        Tpow = ideal_product(Tpow, T);
        H = ideal_sum(H, ideal_product(D[static_cast<size_t>(i)], Tpow));
    }
    return H.tidy();
}

Ideal restrict_to_hyperplane(const Ideal& I, const std::string& v) {
    std::vector<std::string> nv;
    for (const auto& w : I.vars())
        if (w != v) nv.push_back(w);
    if (nv.size() == I.vars().size()) throw AlgebraError("unknown variable '" + v + "'");
    std::vector<Poly> g;
    for (const auto& p : I.gens()) g.push_back(restrict_var(p, v));
    return Ideal(nv, g);
}

std::optional<std::vector<int>> monomial_exponents(const Ideal& I, const std::vector<std::string>& E,
                                                   const std::vector<std::string>& params) {
    if (I.is_zero()) return std::nullopt;
    Poly f;
    if (I.is_rational()) {
        const auto& b = I.basis();
        if (b.size() != 1) return std::nullopt;
        f = b[0];
    } else {
        if (I.gens().size() != 1) return std::nullopt;
        f = I.gens()[0];
    }
    const auto& vars = f.vars();
    std::vector<int> eidx, pidx;
    for (const auto& e : E) {
        int i = f.var_index(e);
        if (i < 0) throw AlgebraError("unknown divisor variable '" + e + "'");
        eidx.push_back(i);
    }
    for (const auto& p : params) {
        int i = f.var_index(p);
        if (i >= 0) pidx.push_back(i);
    }
    auto strip_params = [&](Exp e) {
        for (int i : pidx) e[static_cast<size_t>(i)] = 0;
        return e;
    };
    // The monomial m carrying the unit part.
    std::optional<Exp> m;
    for (const auto& [e, c] : f.terms()) {
        if (!c.is_unit()) continue;
        Exp s = strip_params(e);
        if (m && *m != s) return std::nullopt;
        m = s;
    }
    if (!m) return std::nullopt;
    for (const auto& [e, c] : f.terms()) {
        Exp s = strip_params(e);
        if (c.is_unit()) continue;
        for (size_t i = 0; i < s.size(); ++i)
            if (s[i] < (*m)[i]) return std::nullopt;
    }
    for (size_t i = 0; i < vars.size(); ++i) {
        if ((*m)[i] == 0) continue;
        if (std::find(eidx.begin(), eidx.end(), static_cast<int>(i)) == eidx.end()) return std::nullopt;
    }
    std::vector<int> out;
    for (int i : eidx) out.push_back((*m)[static_cast<size_t>(i)]);
    return out;
}

Ideal eliminate(const Ideal& I, const std::vector<std::string>& drop_vars) {
    std::vector<std::string> order_vars, keep;
    for (const auto& v : drop_vars) {
        if (std::find(I.vars().begin(), I.vars().end(), v) == I.vars().end())
            throw AlgebraError("unknown variable '" + v + "'");
        order_vars.push_back(v);
    }
    for (const auto& v : I.vars())
        if (std::find(drop_vars.begin(), drop_vars.end(), v) == drop_vars.end()) {
            order_vars.push_back(v);
            keep.push_back(v);
        }
    Ideal J = I.embed(order_vars);
    auto b = J.basis(MonomialOrder::block_order(static_cast<int>(drop_vars.size())));
    std::vector<Poly> out;
    for (const auto& p : b) {
        bool uses_drop = false;
        for (size_t i = 0; i < drop_vars.size(); ++i) uses_drop |= p.uses(static_cast<int>(i));
        if (!uses_drop) out.push_back(p.embed(keep));
    }
    return Ideal(keep, out);
}

namespace {
Poly monic(const Poly& p) {
    if (p.is_zero()) return p;
    Exp lm = leading_exp(p, MonomialOrder::degrevlex());
    return p.scaled(p.terms().at(lm).inverse());
}
}  // namespace

Poly exact_quotient(const Poly& f, const Poly& g) {
    auto [q, r] = divide(f, g, MonomialOrder::degrevlex());
    if (!r.is_zero()) throw AlgebraError("inexact polynomial division");
    return q;
}

Poly poly_gcd(const Poly& f, const Poly& g) {
    if (f.is_zero()) return monic(g);
    if (g.is_zero()) return monic(f);
    if (f.is_constant() || g.is_constant()) return Poly::constant(f.vars(), Scalar(1));
    if (divide(f, g, MonomialOrder::degrevlex()).second.is_zero()) return monic(g);
    if (divide(g, f, MonomialOrder::degrevlex()).second.is_zero()) return monic(f);
    Ideal L = ideal_intersection(Ideal(f.vars(), {f}), Ideal(f.vars(), {g.embed(f.vars())}));
    const auto& b = L.basis();
    if (b.size() != 1) throw AlgebraError("lcm computation did not yield a principal ideal");
    return monic(exact_quotient(f * g.embed(f.vars()), b[0]));
}

Poly squarefree_part(const Poly& f) {
    if (f.is_constant()) return f.is_zero() ? f : Poly::constant(f.vars(), Scalar(1));
    Poly g = f;
    for (const auto& v : f.vars()) {
        Poly d = partial_derivative(f, v);
        if (!d.is_zero()) g = poly_gcd(g, d);
    }
    return monic(exact_quotient(f, g));
}

bool is_trivial(const Ideal& I, const Genericity& g) {
    if (!g.active()) return is_trivial(I);
    if (I.is_zero()) return false;
    if (is_trivial(I)) return true;
    std::vector<std::string> drop;
    for (const auto& v : I.vars())
        if (std::find(g.params.begin(), g.params.end(), v) == g.params.end()) drop.push_back(v);
    if (drop.size() == I.vars().size()) return false;
    return !eliminate(I, drop).is_zero();
}

bool radical_member(const Poly& f, const Ideal& I, const Genericity& g) {
    if (f.is_zero()) return true;
    auto v = with_aux(I.vars());
    Poly u = Poly::variable(v, kAux);
    Poly r = Poly::constant(v, Scalar(1)) - u * f.embed(I.vars()).embed(v);
    Ideal J = add_generators(I.embed(v), {r});
    return is_trivial(J, g);
}

bool locus_contained(const Ideal& I, const Ideal& J, const Genericity& g) {
    for (const auto& p : J.gens())
        if (!radical_member(p.embed(I.vars()), I, g)) return false;
    return true;
}

bool locus_equal(const Ideal& I, const Ideal& J, const Genericity& g) {
    return locus_contained(I, J, g) && locus_contained(J, I, g);
}

}  // namespace rk
