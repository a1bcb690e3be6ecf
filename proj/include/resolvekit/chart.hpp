// Affine charts of basic objects, blow-ups along coordinate subspaces and
// the total / controlled / proper transforms.
#pragma once

#include "resolvekit/ideal.hpp"
#include "resolvekit/poly.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rk {

struct Divisor {
    std::string var;
    // 0 for the input divisors, k for the exceptional divisor of step k-1.
    int birth = 0;
    // Position among the input divisors, or birth for exceptional ones;
    // used as the index in the Gamma invariant.
    int index = 0;
    // Membership in E- (set by the resolver when it splits E).
    bool minus = true;
};

struct MarkedChart {
    std::vector<std::string> vars;
    VarSet fiber;
    VarSet base{{}, VarRole::Base};
    // Base variables are treated as generic parameters (symbolic fiber).
    bool generic = false;
    // Derivations only along fiber variables.
    bool relative = false;

    Ideal I;  // controlled transform
    int b = 1;
    std::vector<Divisor> E;
    int input_divisors = 0;
    // Divisors born after `start` are factored out of Ibar.
    int start = 0;
    Ideal Ibar;  // I with maximal powers of exceptional divisors removed
    std::map<int, int> a;  // birth -> exponent in I = Ibar * prod exc^a

    std::vector<std::string> root_vars;
    std::map<std::string, Poly> chart_map;  // root variable -> polynomial in vars
    Poly total_factor;  // total transform of the root ideal = I * total_factor

    std::vector<std::string> derivation_vars() const;
    Genericity genericity() const;
    bool is_divisor_var(const std::string& v) const;
    const Divisor* divisor_of(const std::string& v) const;
    std::vector<std::string> divisor_vars() const;
    std::string describe() const;
};

MarkedChart make_chart(const std::vector<std::string>& vars, const std::vector<std::string>& base,
                       const std::vector<Poly>& gens, int b, const std::vector<std::string>& E);

// Controlled transform: divide the total transform by exc^b.
Ideal controlled_transform(const Ideal& total, int b, const std::string& exc);
// Proper transform along one divisor: (I / exc^a, a) with a maximal.
std::pair<Ideal, int> proper_transform(const Ideal& I, const std::string& exc);

// Recompute Ibar and the exponents a from I.
void refresh_proper(MarkedChart& c);

// Blow-up along V(center_vars), one chart per center variable. The new
// exceptional divisor gets birth `birth`.
std::vector<MarkedChart> blowup(const MarkedChart& chart, const std::vector<std::string>& center_vars, int birth);

// Codimension-one center V(v): the blow-up is the identity and the
// controlled transform divides by v^b.
MarkedChart divide_along(const MarkedChart& chart, const std::string& v, int birth);

// Polynomial automorphism v -> image (image must not involve v other than
// linearly with constant coefficient).
MarkedChart change_coordinates(const MarkedChart& chart, const std::string& v, const Poly& image);

struct FiberPoint {
    enum Kind { Rational, Generic, Truncate };
    Kind kind = Rational;
    Q t0 = 0;
    int n = 0;

    static FiberPoint at(const Q& t) { return {Rational, t, 0}; }
    static FiberPoint generic_point() { return {Generic, 0, 0}; }
    static FiberPoint truncate(int n, const Q& t) { return {Truncate, t, n}; }
    std::string str() const;
};

// Fiber of a chart with exactly one base variable.
MarkedChart fiberize(const MarkedChart& chart, const FiberPoint& p);
// Single polynomial version of the truncated fiber: t -> t0 + s in A_n.
Poly truncate_poly(const Poly& p, const std::string& t, const Q& t0, int n);

// I = Ibar * prod exc^a, tested as ideal equality.
bool bookkeeping_holds(const MarkedChart& c);
// The root ideal pulled back by the chart map equals I * total_factor.
bool chart_map_consistent(const MarkedChart& c, const Ideal& root);

}  // namespace rk
