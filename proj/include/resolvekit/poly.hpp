// Sparse multivariate polynomials over Scalar.
#pragma once

#include "resolvekit/scalar.hpp"

#include <limits>
#include <map>
#include <string>
#include <vector>

namespace rk {

using Exp = std::vector<int>;

constexpr int kInfinity = std::numeric_limits<int>::max();

enum class VarRole { Fiber, Base };

// Variables of a ring tagged as fiber (derivable, blow-up-able) or base.
struct VarSet {
    std::vector<std::string> names;
    VarRole role = VarRole::Fiber;

    bool contains(const std::string& v) const;
};

class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<std::string> vars);

    static Poly constant(const std::vector<std::string>& vars, const Scalar& c);
    static Poly variable(const std::vector<std::string>& vars, const std::string& name);
    static Poly monomial(const std::vector<std::string>& vars, const Exp& e, const Scalar& c = Scalar(1));

    const std::vector<std::string>& vars() const { return vars_; }
    const std::map<Exp, Scalar>& terms() const { return terms_; }
    size_t nvars() const { return vars_.size(); }
    int var_index(const std::string& name) const;
    bool has_var(const std::string& name) const { return var_index(name) >= 0; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Scalar constant_term() const;
    int total_degree() const;
    int degree_in(int idx) const;
    int min_degree() const;
    // True when some term involves the variable.
    bool uses(int idx) const;
    // Truncation order of the coefficients, -1 when all are rational.
    int truncation() const;

    void add_term(const Exp& e, const Scalar& c);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly scaled(const Scalar& c) const;
    Poly pow(int k) const;
    Poly times_monomial(const Exp& e) const;
    bool operator==(const Poly& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // Re-express in a ring whose variable list contains every variable used here.
    Poly embed(const std::vector<std::string>& new_vars) const;

    std::string str() const;

private:
    void check_ring(const Poly& o) const;
    std::vector<std::string> vars_;
    std::map<Exp, Scalar> terms_;
};

Poly partial_derivative(const Poly& p, const std::string& v);

// Simultaneous substitution; the result lives in `target_vars`. Unbound
// variables of p are mapped to the same-named variable of the target.
Poly substitute(const Poly& p, const std::map<std::string, Poly>& bindings,
                const std::vector<std::string>& target_vars);
// Same, with the target ring equal to p's ring.
Poly substitute(const Poly& p, const std::map<std::string, Poly>& bindings);

// Largest m with p in (center_vars)^m; kInfinity for p = 0.
int order_along(const Poly& p, const std::vector<std::string>& center_vars);
// Variant counting only terms whose coefficient is a unit (matters over A_n).
int order_along_strict(const Poly& p, const std::vector<std::string>& center_vars);

// Exact quotient p / m for a monomial m; throws when m does not divide p.
Poly divide_by_monomial(const Poly& p, const Exp& m);

// Set a variable to zero and remove it from the ring.
Poly restrict_var(const Poly& p, const std::string& v);

std::vector<std::string> union_vars(const std::vector<std::string>& a, const std::vector<std::string>& b);

}  // namespace rk
