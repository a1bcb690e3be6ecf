#include "support.hpp"

#include "resolvekit/resolver.hpp"

#include <doctest.h>

using namespace rk;
using namespace rktest;

namespace {

const std::vector<std::string> txy{"t", "x", "y"};
const std::vector<std::string> xyz{"x", "y", "z"};

MarkedChart family_chart(const std::string& gen, int b) {
    MarkedChart c = make_chart(txy, {"t"}, {P(gen, txy)}, b, {});
    c.relative = true;
    return c;
}

// Independent check of the chart map: pull back the root generators by
// substitution and compare with I * total_factor.
bool pullback_matches(const MarkedChart& c, const Ideal& root) {
    std::vector<Poly> pulled;
    for (const auto& g : root.gens()) pulled.push_back(substitute(g.embed(c.root_vars), c.chart_map, c.vars));
    Ideal total = ideal_product(c.I, Ideal(c.vars, {c.total_factor}));
    return ideal_equal(Ideal(c.vars, pulled), total);
}

}  // namespace

TEST_CASE("blow-up of the second family at the origin") {
    MarkedChart c = family_chart("x^2*y^2 + t*x^4", 2);
    auto charts = blowup(c, {"x", "y"}, 1);
    REQUIRE(charts.size() == 2);
    const MarkedChart& cx = charts[0];
    CHECK(ideal_equal(cx.I, I(txy, {"x^2*(y^2 + t)"})));
    CHECK(ideal_equal(cx.Ibar, I(txy, {"y^2 + t"})));
    CHECK(cx.a.at(1) == 2);
    CHECK(cx.total_factor == P("x^2", txy));
    CHECK(cx.chart_map.at("y") == P("x*y", txy));
    REQUIRE(cx.E.size() == 1);
    CHECK(cx.E[0].var == "x");
    CHECK(cx.E[0].birth == 1);
    const MarkedChart& cy = charts[1];
    CHECK(ideal_equal(cy.I, I(txy, {"y^2*(x^2 + t*x^4)"})));
}

TEST_CASE("blow-up rejects bad centers") {
    MarkedChart c = family_chart("x^2 + t*y^2", 2);
    CHECK_THROWS_AS(blowup(c, {"x"}, 1), AlgebraError);
    CHECK_THROWS_AS(blowup(c, {"t", "x"}, 1), AlgebraError);
    // Non-permissible: the total transform is not divisible by exc^b.
    MarkedChart d = make_chart(xyz, {}, {P("x + y^2", xyz)}, 2, {});
    CHECK_THROWS_AS(blowup(d, {"x", "y"}, 1), AlgebraError);
}

TEST_CASE("controlled and proper transforms") {
    CHECK(ideal_equal(controlled_transform(I(txy, {"x^4*(y^2 + t)"}), 2, "x"), I(txy, {"x^2*(y^2 + t)"})));
    CHECK(is_trivial(controlled_transform(I(txy, {"x^2"}), 2, "x")));
    CHECK(ideal_equal(controlled_transform(I(txy, {"x^3 + x^2*y"}), 2, "x"), I(txy, {"x + y"})));
    CHECK_THROWS_AS(controlled_transform(I(txy, {"x + y"}), 2, "x"), AlgebraError);

    auto [p1, a1] = proper_transform(I(txy, {"x^4*(y^2 + t)"}), "x");
    CHECK(a1 == 4);
    CHECK(ideal_equal(p1, I(txy, {"y^2 + t"})));
    auto [p2, a2] = proper_transform(I(txy, {"x^2 + y"}), "x");
    CHECK(a2 == 0);
    CHECK(ideal_equal(p2, I(txy, {"x^2 + y"})));
    auto [p3, a3] = proper_transform(I(txy, {"x^2*y^2", "x^3"}), "x");
    CHECK(a3 == 2);
    CHECK(ideal_equal(p3, I(txy, {"y^2", "x"})));
}

TEST_CASE("codimension-one centers divide the ideal") {
    MarkedChart c = make_chart({"x", "y"}, {}, {P("x^3*y", {"x", "y"})}, 2, {});
    MarkedChart d = divide_along(c, "x", 1);
    CHECK(ideal_equal(d.I, I({"x", "y"}, {"x*y"})));
    CHECK(d.is_divisor_var("x"));
    CHECK(bookkeeping_holds(d));
}

TEST_CASE("coordinate changes act by substitution") {
    MarkedChart c = make_chart({"x", "y"}, {}, {P("x^2 - y^3", {"x", "y"})}, 2, {});
    MarkedChart d = change_coordinates(c, "x", P("x + y^2", {"x", "y"}));
    CHECK(ideal_equal(d.I, I({"x", "y"}, {"(x + y^2)^2 - y^3"})));
    CHECK(chart_map_consistent(d, c.I));
}

TEST_CASE("fibers of a family") {
    MarkedChart r = make_chart({"t", "x"}, {"t"}, {P("t*x + x^3", {"t", "x"})}, 3, {});
    r.relative = true;
    MarkedChart f0 = fiberize(r, FiberPoint::at(0));
    CHECK(f0.vars == std::vector<std::string>{"x"});
    CHECK(ideal_equal(f0.I, I({"x"}, {"x^3"})));
    CHECK(f0.b == 3);

    MarkedChart s = family_chart("x^2 + t*y^2", 2);
    MarkedChart tr = fiberize(s, FiberPoint::truncate(1, 0));
    REQUIRE(tr.I.gens().size() == 1);
    Poly g = tr.I.gens()[0];
    CHECK(g.truncation() == 1);
    CHECK(g.terms().at({0, 2}).truncated().coeffs() == std::vector<Q>{Q(0), Q(1)});

    MarkedChart gen = fiberize(s, FiberPoint::generic_point());
    CHECK(gen.generic);
    CHECK(ideal_equal(gen.I, s.I));

    CHECK(truncate_poly(P("t*x", {"t", "x"}), "t", 1, 2).str() == "(1 + s)*x");
}

TEST_CASE("bookkeeping and chart maps along random blow-up chains") {
    std::mt19937 rng(31);
    int chains = 0;
    for (int k = 0; k < 40 && chains < 15; ++k) {
        Poly f = random_poly(rng, xyz, 5, 4, 2);
        if (f.is_zero() || order_along(f, {"x", "y"}) < 2) continue;
        MarkedChart c = make_chart(xyz, {}, {f}, 2, {});
        Ideal root = c.I;
        ++chains;
        std::vector<std::string> center{"x", "y"};
        for (int depth = 1; depth <= 3; ++depth) {
            auto charts = blowup(c, center, depth);
            for (const auto& ch : charts) {
                CHECK(bookkeeping_holds(ch));
                CHECK(chart_map_consistent(ch, root));
                CHECK(pullback_matches(ch, root));
            }
            // Continue in a chart whose ideal still has order >= 2 along the center.
            bool moved = false;
            for (const auto& ch : charts) {
                for (auto cv : {std::vector<std::string>{"x", "y"}, std::vector<std::string>{"y", "z"},
                                std::vector<std::string>{"x", "z"}}) {
                    bool ok = true;
                    for (const auto& g : ch.I.gens()) ok &= order_along(g, cv) >= 2;
                    if (ok) {
                        c = ch;
                        center = cv;
                        moved = true;
                        break;
                    }
                }
                if (moved) break;
            }
            if (!moved) break;
        }
    }
    CHECK(chains >= 10);
}

TEST_CASE("fiber and blow-up commute on monomial families") {
    std::mt19937 rng(32);
    std::uniform_int_distribution<int> e(0, 3);
    for (int k = 0; k < 12; ++k) {
        int ax = e(rng) + 1, ay = e(rng) + 1, bx = e(rng), by = e(rng) + 2;
        std::string gen = "x^" + std::to_string(ax) + "*y^" + std::to_string(ay) + " + t*x^" + std::to_string(bx) +
                          "*y^" + std::to_string(by);
        MarkedChart c = family_chart(gen, 2);
        bool permissible = true;
        for (const auto& g : c.I.gens()) permissible &= order_along(g, {"x", "y"}) >= 2;
        if (!permissible) continue;
        for (const Q& t0 : {Q(0), Q(1), Q(-2)}) {
            auto up = blowup(c, {"x", "y"}, 1);
            auto down = blowup(fiberize(c, FiberPoint::at(t0)), {"x", "y"}, 1);
            REQUIRE(up.size() == down.size());
            for (size_t i = 0; i < up.size(); ++i) {
                MarkedChart f = fiberize(up[i], FiberPoint::at(t0));
                CHECK(f.vars == down[i].vars);
                CHECK(ideal_equal(f.I, down[i].I));
            }
        }
    }
}

TEST_CASE("chart tree serialization") {
    MarkedChart c = make_chart({"x", "y"}, {}, {P("x^2 - y^3", {"x", "y"})}, 2, {});
    ChartTree t = resolve(c);
    auto j = t.to_json();
    CHECK(j.is_object());
    std::string dot = t.to_dot();
    CHECK(dot.rfind("digraph", 0) == 0);
    CHECK(dot.find("(-y^3 + x^2); 2; []") != std::string::npos);
    // Every edge's chart map composes with the root ideal.
    for (const auto& n : t.nodes) CHECK(chart_map_consistent(n.chart, c.I));
}
