// Buchberger's algorithm over Q with degrevlex, lex and two-block orders.
#pragma once

#include "resolvekit/poly.hpp"

#include <stdexcept>
#include <vector>

namespace rk {

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MonomialOrder {
    enum Kind { DegRevLex, Lex, Block };
    Kind kind = DegRevLex;
    // Block: the first `block` variables form the larger block; each block
    // is ordered by degrevlex.
    int block = 0;

    static MonomialOrder degrevlex() { return {DegRevLex, 0}; }
    static MonomialOrder lex() { return {Lex, 0}; }
    static MonomialOrder block_order(int k) { return {Block, k}; }

    // Negative, zero or positive as a < b, a == b, a > b.
    int compare(const Exp& a, const Exp& b) const;
    bool operator<(const MonomialOrder& o) const {
        return kind != o.kind ? kind < o.kind : block < o.block;
    }
    bool operator==(const MonomialOrder& o) const { return kind == o.kind && block == o.block; }
};

// Cap on S-polynomial reductions per Groebner computation.
void set_groebner_step_cap(long cap);
long groebner_step_cap();

// Reduced, monic Groebner basis sorted by increasing leading monomial.
std::vector<Poly> groebner_basis(const std::vector<Poly>& gens, const std::vector<std::string>& vars,
                                 const MonomialOrder& order);

// Normal form of f with respect to a Groebner basis.
Poly normal_form(const Poly& f, const std::vector<Poly>& basis, const MonomialOrder& order);

// Leading exponent of a nonzero polynomial.
Exp leading_exp(const Poly& p, const MonomialOrder& order);

// Division of f by a single g: returns (quotient, remainder).
std::pair<Poly, Poly> divide(const Poly& f, const Poly& g, const MonomialOrder& order);

}  // namespace rk
