// Ideal calculus: membership, loci, the Delta operators, coefficient and
// homogenized ideals, elimination.
#pragma once

#include "resolvekit/groebner.hpp"
#include "resolvekit/poly.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace rk {

class Ideal {
public:
    Ideal() : memo_(std::make_shared<Memo>()) {}
    Ideal(std::vector<std::string> vars, std::vector<Poly> gens);
    static Ideal unit(const std::vector<std::string>& vars);
    static Ideal generated_by_vars(const std::vector<std::string>& vars, const std::vector<std::string>& which);

    const std::vector<std::string>& vars() const { return vars_; }
    const std::vector<Poly>& gens() const { return gens_; }
    bool is_zero() const { return gens_.empty(); }
    // True when every generator has rational coefficients.
    bool is_rational() const;

    // Memoized reduced Groebner basis.
    const std::vector<Poly>& basis(const MonomialOrder& order = MonomialOrder::degrevlex()) const;
    // Same ideal generated by its degrevlex basis.
    Ideal tidy() const;

    Ideal embed(const std::vector<std::string>& new_vars) const;
    std::string str() const;

private:
    struct Memo {
        std::mutex mu;
        std::map<MonomialOrder, std::vector<Poly>> bases;
    };
    std::vector<std::string> vars_;
    std::vector<Poly> gens_;
    std::shared_ptr<Memo> memo_;
};

struct WeightedIdeal {
    Ideal ideal;
    int b = 1;
};

std::vector<Poly> groebner(const Ideal& I, const MonomialOrder& order = MonomialOrder::degrevlex());

bool is_trivial(const Ideal& I);
bool member(const Poly& f, const Ideal& I);
bool radical_member(const Poly& f, const Ideal& I);
// Equality as ideals.
bool ideal_equal(const Ideal& I, const Ideal& J);
// J contained in I.
bool ideal_contains(const Ideal& I, const Ideal& J);
// V(I) contained in V(J): generators of J lie in rad(I).
bool locus_contained(const Ideal& I, const Ideal& J);
// V(I) = V(J), by mutual radical membership.
bool locus_equal(const Ideal& I, const Ideal& J);

Ideal ideal_sum(const Ideal& I, const Ideal& J);
Ideal ideal_product(const Ideal& I, const Ideal& J);
Ideal ideal_power(const Ideal& I, int k);
Ideal ideal_intersection(const Ideal& I, const Ideal& J);
Ideal add_generators(const Ideal& I, const std::vector<Poly>& extra);

// Delta^k with first partials taken along derivation_vars.
Ideal delta(const Ideal& I, int k, const std::vector<std::string>& derivation_vars);
Ideal sing_locus(const Ideal& I, int b, const std::vector<std::string>& derivation_vars);
// Largest m with Delta^(m-1)(I) nontrivial; 0 for the unit ideal.
int max_order(const Ideal& I, const std::vector<std::string>& derivation_vars);

WeightedIdeal coefficient_ideal(const Ideal& I, int b, const std::vector<std::string>& derivation_vars);
// Coefficient ideal restricted to V(z), computed summand by summand in the
// smaller ring. Returns (C(I)|_Z, b!).
WeightedIdeal restricted_coefficient_ideal(const Ideal& I, int b, const std::vector<std::string>& derivation_vars,
                                           const std::string& z);
Ideal homogenize(const Ideal& I, int b, const std::vector<std::string>& derivation_vars);
// Set v = 0 and drop v from the ring. The result may be the zero ideal.
Ideal restrict_to_hyperplane(const Ideal& I, const std::string& v);

// Exponents (a_1..a_m) when I = (unit * prod E_i^a_i), otherwise nullopt.
// Variables in `params` are treated as generic (their nonzero polynomials
// count as units).
std::optional<std::vector<int>> monomial_exponents(const Ideal& I, const std::vector<std::string>& E,
                                                   const std::vector<std::string>& params = {});

// I intersected with the subring in the remaining variables.
Ideal eliminate(const Ideal& I, const std::vector<std::string>& drop_vars);

// Polynomial gcd over Q, normalized monic in degrevlex.
Poly poly_gcd(const Poly& f, const Poly& g);
Poly exact_quotient(const Poly& f, const Poly& g);
Poly squarefree_part(const Poly& f);

// Locus tests in which the variables `params` are generic: a locus is
// empty when its ideal meets Q[params] \ {0}.
struct Genericity {
    std::vector<std::string> params;
    bool active() const { return !params.empty(); }
};

bool is_trivial(const Ideal& I, const Genericity& g);
bool radical_member(const Poly& f, const Ideal& I, const Genericity& g);
bool locus_contained(const Ideal& I, const Ideal& J, const Genericity& g);
bool locus_equal(const Ideal& I, const Ideal& J, const Genericity& g);
int max_order(const Ideal& I, const std::vector<std::string>& derivation_vars, const Genericity& g);

}  // namespace rk
