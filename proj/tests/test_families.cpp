#include "support.hpp"

#include "resolvekit/families.hpp"

#include <doctest.h>

using namespace rk;
using namespace rktest;

namespace {

const std::vector<std::string> txy{"t", "x", "y"};

FamilyObject fam(const std::string& gen, int b = 2) { return make_family(txy, "t", {gen}, b); }

FamilyObject r_example() { return make_family({"t", "x"}, "t", {"t*x + x^3"}, 3); }

// Pointwise oracle for (R): the relative singular locus at t = t0 and the
// singular locus of the fiber computed on its own.
bool relative_sing_matches_fibers(const FamilyObject& F) {
    const MarkedChart& r = F.root;
    Ideal rel = sing_locus(r.I, r.b, r.fiber.names);
    for (const auto& t0 : F.samples) {
        MarkedChart f = F.fiber(Sample::at(t0));
        std::vector<Poly> g;
        for (const auto& p : rel.gens()) {
            Poly q = substitute(p, {{"t", Poly::constant(r.vars, Scalar(t0))}});
            g.push_back(restrict_var(q, "t"));
        }
        if (!locus_equal(Ideal(f.vars, g), sing_locus(f.I, f.b, f.vars))) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("family objects and their fibers") {
    FamilyObject F = fam("x^2 + t*y^2");
    CHECK(F.t() == "t");
    CHECK(F.sample_points().size() == 4);
    CHECK(ideal_equal(F.fiber(Sample::at(0)).I, I({"x", "y"}, {"x^2"})));
    CHECK(ideal_equal(F.fiber(Sample::at(-1)).I, I({"x", "y"}, {"x^2 - y^2"})));
    CHECK(F.fiber(Sample::generic_point()).generic);
    CHECK(Sample::at(Q(1, 2)).str() == "1/2");
    CHECK(Sample::generic_point().str() == "generic");
}

TEST_CASE("condition R") {
    ConditionReport a = check_R(r_example());
    CHECK(a.fails());
    CHECK(is_trivial(sing_locus(r_example().root.I, 3, {"t", "x"})));
    CHECK(check_R(fam("x^2 + t*y^2")).fails());
    CHECK(check_R(fam("x^2")).holds());
    CHECK(check_R(fam("y^2 - x^3")).holds());
}

TEST_CASE("relative singular loci agree with the fibers") {
    for (const auto& g : {"x^2 + t*y^2", "x^2*y^2 + t*x^4", "y^2 - x^3", "x^2 + (y + t)^3", "x^2 - y^2"})
        CHECK(relative_sing_matches_fibers(fam(g)));
    CHECK(relative_sing_matches_fibers(r_example()));
}

TEST_CASE("condition A") {
    ConditionReport bad = check_A(fam("x^2 - y^2"));
    CHECK(bad.holds());
    ConditionReport s1 = check_A(fam("x^2 + t*y^2"));
    CHECK(s1.fails());
    CHECK(s1.step == 0);
    CHECK(check_A(fam("x^2 + (y + t)^3")).holds());
    CHECK(check_A(fam("y^2 - x^3")).holds());
}

TEST_CASE("conditions F and C on the second family") {
    FamilyObject F = fam("x^2*y^2 + t*x^4");
    ConditionReport f = check_F(F);
    CHECK(f.fails());
    CHECK(f.step == 1);
    CHECK(f.sample == std::optional<std::string>("0"));
    ConditionReport c = check_C(F);
    CHECK(c.fails());
    CHECK(c.step == 1);
    // Step 0 agrees for the family and the fiber at t = 0.
    ChartTree fiber = resolve(F.fiber(Sample::at(0)));
    CHECK(fiber.steps.at(0).max.str() == "(2,0,(1,0,inf_0))");
}

TEST_CASE("conditions F and C on the first family and on equisolvable ones") {
    ConditionReport f = check_F(fam("x^2 + t*y^2"));
    CHECK(f.fails());
    CHECK(f.step == 0);
    CHECK(f.sample == std::optional<std::string>("0"));
    for (const auto& g : {"y^2 - x^3", "x^2 + (y + t)^3", "x^2 - y^2"}) {
        CHECK(check_F(fam(g)).holds());
        CHECK(check_C(fam(g)).holds());
    }
}

TEST_CASE("tau") {
    FamilyObject F = fam("x^2 + t*y^2");
    TauValue at0 = tau(F, Sample::at(0)), gen = tau(F, Sample::generic_point());
    CHECK_FALSE(at0 == gen);
    CHECK(at0.str() == "((1,0,inf_1), 1, inf)");
    CHECK(gen.str() == "((1,0,(1,0,inf_0)), 1, inf)");
    CHECK(check_tau(F).fails());
    CHECK(check_tau(fam("y^2 - x^3")).holds());
    CHECK(check_tau(fam("x^2 - y^2")).holds());
}

TEST_CASE("component counts of centers") {
    // The second family at t = 0 blows up two lines at step 1.
    ChartTree t = resolve(fam("x^2*y^2 + t*x^4").fiber(Sample::at(0)));
    auto counts = center_components(t);
    REQUIRE(counts.size() >= 2);
    CHECK(counts[0] == 1);
    CHECK(counts[1] == 2);
}

TEST_CASE("condition E") {
    ConditionReport e = check_E(fam("x^2 + t*y^2"), 0, 1);
    CHECK(e.fails());
    CHECK(e.step == 0);
    CHECK(e.witness["detail"]["Delta"] == "((1)*x, (s)*y)");
    for (int n = 1; n <= 2; ++n)
        for (const Q& t0 : {Q(0), Q(1), Q(-1)}) CHECK(check_E(fam("y^2 - x^3"), t0, n).holds());
    CHECK(check_E(fam("x^2 + (y + t)^3"), 0, 2).holds());
    CHECK(check_E_sampled(fam("x^2*y^2 + t*x^4"), 2).fails());
}

TEST_CASE("T-sequences") {
    TSequence bad = family_transform_sequence(fam("x^2 - y^2"));
    CHECK(bad.tree.length() == 1);
    CHECK(bad.equiresolved);
    TSequence cusp = family_transform_sequence(fam("y^2 - x^3"));
    CHECK(cusp.tree.length() == resolve(fam("y^2 - x^3").fiber(Sample::at(0))).length());
    CHECK(cusp.equiresolved);
    CHECK_THROWS_AS(family_transform_sequence(fam("x^2 + t*y^2")), AlgebraError);
    TSequence r = family_transform_sequence(r_example());
    CHECK(r.tree.length() == 0);
    CHECK_FALSE(r.equiresolved);
}

TEST_CASE("permissibility defects") {
    FamilyObject s1 = fam("x^2 + t*y^2");
    CHECK_FALSE(permissibility_defect(s1.root, {"x", "y"}));
    FamilyObject r = r_example();
    auto d = permissibility_defect(r.root, {"x"});
    REQUIRE(d);
    CHECK(*d == P("t", {"t", "x"}));
}

TEST_CASE("blow-up commutes with taking fibers") {
    FamilyObject F = fam("x^2*y^2 + t*x^4");
    for (const auto& s : F.sample_points()) CHECK(blowup_commutes(F.root, {"x", "y"}, s));
    FamilyObject G = fam("x^2 - y^2");
    for (const auto& s : G.sample_points()) CHECK(blowup_commutes(G.root, {"x", "y"}, s));
}

TEST_CASE("failing reports carry witnesses") {
    for (const auto& g : {"x^2 + t*y^2", "x^2*y^2 + t*x^4"}) {
        FamilyObject F = fam(g);
        for (const auto& r : {check_R(F), check_A(F), check_F(F), check_C(F), check_tau(F), check_E_sampled(F, 2)}) {
            CHECK(r.fails());
            CHECK_FALSE(r.witness.empty());
            auto j = r.to_json();
            CHECK(j["verdict"] == "fails");
            CHECK(j["condition"] == r.condition);
        }
    }
}

TEST_CASE("A, F, C and E agree on the fixture families") {
    for (const auto& g : {"x^2 + t*y^2", "x^2*y^2 + t*x^4", "y^2 - x^3", "x^2 + (y + t)^3", "x^2 - y^2"}) {
        FamilyObject F = fam(g);
        Verdict a = check_A(F).verdict;
        CHECK(a != Verdict::Indeterminate);
        CHECK(check_F(F).verdict == a);
        CHECK(check_C(F).verdict == a);
        CHECK(check_E_sampled(F, 2).verdict == a);
        CHECK(check_tau(F).verdict == a);
    }
}
