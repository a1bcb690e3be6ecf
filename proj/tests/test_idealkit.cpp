#include "support.hpp"

#include <doctest.h>

using namespace rk;
using namespace rktest;

namespace {

const std::vector<std::string> xy{"x", "y"};
const std::vector<std::string> xyz{"x", "y", "z"};

// Random ideal of one or two generators without constant terms.
Ideal random_ideal(std::mt19937& rng, const std::vector<std::string>& v, int max_deg) {
    std::vector<Poly> g;
    int n = std::uniform_int_distribution<int>(1, 2)(rng);
    while (static_cast<int>(g.size()) < n) {
        Poly p = random_poly(rng, v, max_deg, 3, 1);
        if (!p.is_zero()) g.push_back(p);
    }
    return Ideal(v, g);
}

}  // namespace

TEST_CASE("membership and radical membership") {
    Ideal J = I(xy, {"x^2", "y^3"});
    CHECK(member(P("x^2*y + y^4", xy), J));
    CHECK_FALSE(member(P("x*y", xy), J));
    CHECK(radical_member(P("x*y", xy), J));
    CHECK_FALSE(radical_member(P("x + 1", xy), J));
    CHECK(is_trivial(I(xy, {"x", "x - 1"})));
    CHECK_FALSE(is_trivial(J));
}

TEST_CASE("ideal equality versus locus equality") {
    Ideal a = I(xy, {"x^2", "y"}), b = I(xy, {"x", "y"});
    CHECK_FALSE(ideal_equal(a, b));
    CHECK(locus_equal(a, b));
    CHECK(ideal_contains(b, a));
    CHECK_FALSE(ideal_contains(a, b));
    CHECK(ideal_equal(I(xy, {"x + y", "x - y"}), b));
    CHECK(ideal_equal(I(xy, {"x^2 - y^2", "x + y"}), I(xy, {"x + y"})));
}

TEST_CASE("sum, product, power and intersection") {
    std::mt19937 rng(21);
    for (int k = 0; k < 10; ++k) {
        Ideal a = random_ideal(rng, xy, 3), b = random_ideal(rng, xy, 3);
        Ideal meet = ideal_intersection(a, b);
        CHECK(ideal_contains(a, meet));
        CHECK(ideal_contains(b, meet));
        CHECK(ideal_contains(meet, ideal_product(a, b)));
        CHECK(ideal_contains(ideal_sum(a, b), a));
        CHECK(ideal_equal(ideal_power(a, 2), ideal_product(a, a)));
    }
    CHECK(ideal_equal(ideal_intersection(I(xy, {"x"}), I(xy, {"y"})), I(xy, {"x*y"})));
}

TEST_CASE("Delta of the cusp") {
    Ideal cusp = I(xy, {"x^2 - y^3"});
    CHECK(ideal_equal(delta(cusp, 1, xy), I(xy, {"x", "y^2"})));
    CHECK(ideal_equal(delta(cusp, 2, xy), I(xy, {"1"})));
    CHECK(max_order(cusp, xy) == 2);
    CHECK(ideal_equal(sing_locus(cusp, 2, xy), I(xy, {"x", "y^2"})));
    CHECK(is_trivial(sing_locus(cusp, 3, xy)));
    CHECK(max_order(Ideal::unit(xy), xy) == 0);
}

TEST_CASE("relative Delta differentiates only along fiber variables") {
    std::vector<std::string> tx{"t", "x"};
    Ideal J = I(tx, {"t*x + x^3"});
    CHECK(is_trivial(delta(J, 2, tx)));
    CHECK(ideal_equal(delta(J, 2, {"x"}), I(tx, {"x", "t"})));
}

TEST_CASE("max order agrees with the Taylor oracle") {
    std::mt19937 rng(22);
    for (int k = 0; k < 25; ++k) {
        Ideal J = random_ideal(rng, xy, 4);
        int m = max_order(J, xy);
        // The origin lies on V(J); its order is a lower bound.
        CHECK(ideal_order_at(J, {{"x", 0}, {"y", 0}}) <= m);
        for (int j = 0; j < 5; ++j) CHECK(ideal_order_at(J, random_point(rng, xy)) <= std::max(m, 0));
        // Points of Sing(J, m) have order exactly m.
        if (m >= 1) CHECK_FALSE(is_trivial(sing_locus(J, m, xy)));
        CHECK(is_trivial(sing_locus(J, m + 1, xy)));
    }
    // Homogeneous generators of degree d: order d at the origin.
    CHECK(max_order(I(xyz, {"x^3 + y^3 + z^3"}), xyz) == 3);
    CHECK(max_order(I(xyz, {"x^2*y - z^3", "y^4"}), xyz) == 3);
}

TEST_CASE("Delta of H(I, b) equals Delta of I") {
    std::mt19937 rng(23);
    for (int k = 0; k < 12; ++k) {
        Ideal J = random_ideal(rng, xy, 4);
        int b = std::uniform_int_distribution<int>(1, 3)(rng);
        Ideal H = homogenize(J, b, xy);
        CHECK(ideal_equal(delta(H, b - 1, xy), delta(J, b - 1, xy)));
        CHECK(ideal_contains(H, J));
    }
}

TEST_CASE("coefficient ideals") {
    Ideal cusp = I(xy, {"x^2 - y^3"});
    auto c = coefficient_ideal(cusp, 2, xy);
    CHECK(c.b == 2);
    CHECK(ideal_equal(c.ideal, I(xy, {"x^2", "x*y^2", "y^3"})));
    auto r = restricted_coefficient_ideal(cusp, 2, xy, "x");
    CHECK(r.b == 2);
    CHECK(r.ideal.vars() == std::vector<std::string>{"y"});
    CHECK(ideal_equal(r.ideal, I({"y"}, {"y^3"})));
    // Restricting the full coefficient ideal gives the same answer.
    CHECK(ideal_equal(restrict_to_hyperplane(c.ideal, "x"), r.ideal));
}

TEST_CASE("restricted coefficient ideal equals restriction of the coefficient ideal") {
    std::mt19937 rng(24);
    for (int k = 0; k < 10; ++k) {
        Ideal J = random_ideal(rng, xyz, 3);
        int b = std::uniform_int_distribution<int>(1, 3)(rng);
        auto full = coefficient_ideal(J, b, xyz);
        auto part = restricted_coefficient_ideal(J, b, xyz, "z");
        CHECK(full.b == part.b);
        CHECK(ideal_equal(restrict_to_hyperplane(full.ideal, "z"), part.ideal));
    }
}

TEST_CASE("monomial exponents") {
    std::vector<std::string> E{"x", "y"};
    auto e = monomial_exponents(I(xyz, {"3*x^2*y"}), E);
    REQUIRE(e);
    CHECK(*e == std::vector<int>{2, 1});
    CHECK_FALSE(monomial_exponents(I(xyz, {"x^2 + y"}), E));
    CHECK_FALSE(monomial_exponents(I(xyz, {"x*z"}), E));
    auto g = monomial_exponents(I(xyz, {"z*x"}), E, {"z"});
    REQUIRE(g);
    CHECK(*g == std::vector<int>{1, 0});
}

TEST_CASE("elimination") {
    Ideal J = I(xyz, {"x - y^2", "z - y^3"});
    Ideal e = eliminate(J, {"y"});
    CHECK(e.vars() == std::vector<std::string>{"x", "z"});
    CHECK(member(P("x^3 - z^2", {"x", "z"}), e));
    CHECK_FALSE(member(P("x - z", {"x", "z"}), e));
    CHECK(eliminate(I(xy, {"x*y - 1"}), {"y"}).is_zero());
}

TEST_CASE("polynomial gcd and square-free part") {
    std::mt19937 rng(25);
    for (int k = 0; k < 15; ++k) {
        Poly a = random_poly(rng, xy, 2, 3), b = random_poly(rng, xy, 2, 3), c = random_poly(rng, xy, 2, 3, 1);
        if (a.is_zero() || b.is_zero() || c.is_zero()) continue;
        Poly g = poly_gcd(a * c, b * c);
        CHECK(exact_quotient(a * c, g) * g == a * c);
        CHECK(exact_quotient(c, exact_quotient(c, poly_gcd(c, g))) * exact_quotient(c, poly_gcd(c, g)) == c);
    }
    CHECK(poly_gcd(P("x^2 - y^2", xy), P("x^2 + 2*x*y + y^2", xy)) == P("x + y", xy));
    CHECK(squarefree_part(P("x^3*y^2", xy)) == P("x*y", xy));
}

TEST_CASE("generic parameters") {
    std::vector<std::string> txy{"t", "x", "y"};
    Genericity g{{"t"}};
    CHECK(is_trivial(I(txy, {"t*x", "x - 1"}), g));
    CHECK_FALSE(is_trivial(I(txy, {"t*x", "x - 1"})));
    CHECK(locus_equal(I(txy, {"x^2 + t*y^2", "x", "t*y"}), I(txy, {"x", "y"}), g));
    CHECK(max_order(I(txy, {"x^2 + t*y^2"}), {"x", "y"}, g) == 2);
}

TEST_CASE("Delta composes and grows") {
    std::mt19937 rng(26);
    for (int k = 0; k < 10; ++k) {
        Ideal J = random_ideal(rng, xy, 4);
        CHECK(ideal_equal(delta(delta(J, 1, xy), 1, xy), delta(J, 2, xy)));
        CHECK(ideal_equal(delta(delta(J, 1, xy), 2, xy), delta(J, 3, xy)));
        CHECK(ideal_contains(delta(J, 1, xy), J));
        CHECK(ideal_contains(delta(J, 2, xy), delta(J, 1, xy)));
    }
}

TEST_CASE("max order is attained on the maximal locus") {
    std::vector<std::string> v{"x", "y"};
    // Sing(J, m) for these ideals contains the listed rational points.
    struct Case {
        std::vector<std::string> gens;
        std::map<std::string, Q> point;
        int m;
    };
    for (const auto& c : std::vector<Case>{{{"x^2 - y^3"}, {{"x", 0}, {"y", 0}}, 2},
                                           {{"(x - 1)^3 + y^4"}, {{"x", 1}, {"y", 0}}, 3},
                                           {{"x^2*y^2 + x^5"}, {{"x", 0}, {"y", 0}}, 4},
                                           {{"x*(y - 2)^2"}, {{"x", 0}, {"y", 2}}, 3}}) {
        Ideal J = I(v, c.gens);
        CHECK(max_order(J, v) == c.m);
        CHECK(ideal_order_at(J, c.point) == c.m);
        Ideal S = sing_locus(J, c.m, v);
        for (const auto& g : S.gens()) CHECK(eval(g, c.point) == 0);
    }
}

TEST_CASE("ideal calculus examples") {
    std::vector<std::string> txy{"t", "x", "y"};
    std::vector<std::string> tx{"t", "x"};
    CHECK(member(P("x^2", xy), I(xy, {"x"})));
    CHECK(radical_member(P("x", xy), I(xy, {"x^2"})));
    CHECK_FALSE(member(P("x", xy), I(xy, {"x^2"})));
    // t*y does not lie in (x, y^2): the two ideals have the same zero set only.
    Ideal lhs = I(txy, {"x^2 + t*y^2", "x", "t*y", "y^2"}), rhs = I(txy, {"x", "y^2"});
    CHECK_FALSE(ideal_equal(lhs, rhs));
    CHECK_FALSE(member(P("t*y", txy), rhs));
    CHECK(locus_equal(lhs, rhs));

    CHECK(ideal_equal(delta(I(tx, {"t*x + x^3"}), 0, tx), I(tx, {"t*x + x^3"})));
    CHECK(locus_equal(sing_locus(I(txy, {"x^2 + t*y^2"}), 2, txy), I(txy, {"x", "y"})));
    CHECK(locus_equal(sing_locus(I(txy, {"x^2 + t*y^2"}), 2, {"x", "y"}), I(txy, {"x", "t*y^2"})));
    CHECK(ideal_equal(sing_locus(I(xy, {"x^2"}), 2, xy), I(xy, {"x"})));
    CHECK(max_order(I(xy, {"x^2*y^2 + x^4"}), xy) == 4);
    CHECK(max_order(I(xy, {"x^2 + y^3"}), xy) == 2);

    auto c1 = coefficient_ideal(I(xy, {"x^2 + y^3"}), 2, xy);
    CHECK(ideal_equal(c1.ideal, I(xy, {"x^2", "x*y^2", "y^3"})));
    auto c2 = coefficient_ideal(I(xy, {"x^2 + y^3"}), 1, xy);
    CHECK(c2.b == 1);
    CHECK(ideal_equal(c2.ideal, I(xy, {"x^2 + y^3"})));
    CHECK(ideal_equal(coefficient_ideal(I(xy, {"x^2"}), 2, xy).ideal, I(xy, {"x^2"})));

    CHECK(ideal_equal(homogenize(I(xy, {"x^2 + y^3"}), 1, xy), I(xy, {"x^2 + y^3"})));
    CHECK(ideal_equal(homogenize(I(xy, {"x^2 + y^3"}), 2, xy), I(xy, {"x^2", "x*y^2", "y^3"})));

    CHECK(ideal_equal(restrict_to_hyperplane(I(xy, {"x^2", "x*y^2", "y^3"}), "x"), I({"y"}, {"y^3"})));
    CHECK(restrict_to_hyperplane(I(xy, {"x"}), "x").is_zero());
    CHECK(ideal_equal(restrict_to_hyperplane(I(xy, {"y^2 + x"}), "x"), I({"y"}, {"y^2"})));

    CHECK(eliminate(I(txy, {"x", "y - t"}), {"x", "y"}).is_zero());
    CHECK(ideal_equal(eliminate(I(tx, {"x", "t"}), {"x"}), I({"t"}, {"t"})));
    CHECK(eliminate(I(tx, {"x*t - 1"}), {"x"}).is_zero());
}

TEST_CASE("monomial test over a truncated ring") {
    // x^2 * (1 + s*x) over A_1.
    std::vector<std::string> x{"x"};
    Poly f(x);
    f.add_term({2}, Scalar(Truncated::constant(1, 1)));
    f.add_term({3}, Scalar(Truncated({Q(0), Q(1)}, 1)));
    auto e = monomial_exponents(Ideal(x, {f}), {"x"});
    REQUIRE(e);
    CHECK(*e == std::vector<int>{2});
}
