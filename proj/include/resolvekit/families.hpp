// One-parameter families of basic objects over the t-line and the
// equiresolution conditions R, A, F, C, tau and E.
#pragma once

#include "resolvekit/chart.hpp"
#include "resolvekit/resolver.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace rk {

struct Sample {
    bool generic = false;
    Q t0 = 0;

    static Sample at(const Q& t) { return {false, t}; }
    static Sample generic_point() { return {true, 0}; }
    FiberPoint point() const { return generic ? FiberPoint::generic_point() : FiberPoint::at(t0); }
    std::string str() const;
};

struct FamilyObject {
    MarkedChart root;  // exactly one base variable
    std::vector<Q> samples;
    bool include_generic = true;
    Caps caps;

    const std::string& t() const { return root.base.names.at(0); }
    std::vector<Sample> sample_points() const;
    MarkedChart fiber(const Sample& s) const { return fiberize(root, s.point()); }
};

// Family (vars include base t) with the default samples 0, 1, -1.
FamilyObject make_family(const std::vector<std::string>& vars, const std::string& t,
                         const std::vector<std::string>& gens, int b, const std::vector<std::string>& E = {},
                         std::vector<Q> samples = {0, 1, -1});

enum class Verdict { Holds, Fails, Indeterminate };
const char* verdict_name(Verdict v);

struct ConditionReport {
    std::string condition;
    Verdict verdict = Verdict::Indeterminate;
    std::optional<int> step;
    std::optional<std::string> sample;
    nlohmann::json witness = nlohmann::json::object();
    std::vector<std::string> notes;

    bool holds() const { return verdict == Verdict::Holds; }
    bool fails() const { return verdict == Verdict::Fails; }
    nlohmann::json to_json() const;
};

struct TauValue {
    std::vector<std::pair<RFValue, int>> entries;  // (max(g_i), c_i)
    bool complete = true;  // false when the fiber resolution stopped with an error
    bool geometric_flag = false;
    std::string error;

    bool operator==(const TauValue& o) const;
    std::string str() const;
};

ConditionReport check_R(const FamilyObject& F);
ConditionReport check_A(const FamilyObject& F);
ConditionReport check_F(const FamilyObject& F);
ConditionReport check_C(const FamilyObject& F);

TauValue tau(const FamilyObject& F, const Sample& s);
ConditionReport check_tau(const FamilyObject& F);

// Condition E at one parameter point and truncation order n >= 1.
ConditionReport check_E(const FamilyObject& F, const Q& t0, int n);
// Condition E over all rational samples and orders 1..n.
ConditionReport check_E_sampled(const FamilyObject& F, int n);

// Number of connected components of each center of a resolution tree.
std::vector<int> center_components(const ChartTree& t);

struct TSequence {
    ChartTree tree;
    bool equiresolved = false;
    nlohmann::json witness = nlohmann::json::object();
};

// Blow-ups of the family along the centers of its absolute resolution,
// each center certified T-permissible. Throws AlgebraError with a witness
// when a center is not.
TSequence family_transform_sequence(const FamilyObject& F);

// nu(I, V(center)) = nu(I^(t), V(center)^(t)) for every t; the failing
// parameter polynomial is returned when it does not hold.
std::optional<Poly> permissibility_defect(const MarkedChart& c, const std::vector<std::string>& center);

// Blow-up then fiber versus fiber then blow-up, chart by chart.
bool blowup_commutes(const MarkedChart& family, const std::vector<std::string>& center, const Sample& s);

}  // namespace rk
