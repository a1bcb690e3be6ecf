// The W-algorithm on affine charts: invariants, nice objects, maximal
// contact descent and the resolution / principalization drivers.
#pragma once

#include "resolvekit/chart.hpp"
#include "resolvekit/chart_tree.hpp"
#include "resolvekit/rfvalue.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rk {

// A verified identity of the algorithm failed.
struct InvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Caps {
    int max_steps = 64;
};

// Global maxima max(g_0), ..., max(g_{r-1}) of the steps already taken.
struct History {
    std::vector<RFValue> maxima;
    int step() const { return static_cast<int>(maxima.size()); }
};

struct NiceObject {
    MarkedChart level;  // object the construction started from
    Ideal I2;
    int b2 = 1;
    std::vector<Divisor> E2;  // E+
    int b_r = 0;
    int nbar = 0;
    Q omega = 0;
    Poly monomial_factor;  // product of exceptional divisors with their exponents
    Ideal J;
    Ideal max_t;                     // ideal of this piece of Max(t)
    std::vector<std::string> piece;  // E- divisors whose intersection carries the piece
    Ideal sing2;                     // Delta^(b2-1)(I2)
};

struct TMax {
    Q omega = 0;
    int nbar = 0;
    int s = 0;  // first step of the current omega run
    Ideal max_omega;
    std::vector<std::vector<std::string>> pieces;
    Ideal locus;  // Max(t), intersection of all pieces' ideals
};

// Result of evaluating one chart at the current step.
struct Evaluation {
    RFValue value;
    std::vector<std::string> center;  // chart variables after `changes`
    std::vector<CoordinateChange> changes;
    bool monomial = false;  // top level in the monomial regime
    std::string defect;     // why the center cannot be blown up, if it cannot
    std::shared_ptr<const LevelNode> chain;  // inductive objects behind the value
};

// max(omega) on Sing and the ideal of Max(omega). Throws on empty Sing.
std::pair<Q, Ideal> omega_max(const MarkedChart& c);
TMax t_max(const MarkedChart& c, const History& h);
// Gamma value and center of a chart in the monomial regime.
std::pair<RFValue, std::vector<std::string>> gamma(const MarkedChart& c);
// Nice object for the piece of Max(t) of largest value.
NiceObject nice_object(const MarkedChart& c, const History& h);
// Maximal contact variable for a nice object; the coordinate change making
// it a coordinate (empty when none is needed) is returned alongside.
std::pair<std::string, std::vector<CoordinateChange>> maximal_contact(const NiceObject& n,
                                                                      const std::vector<std::string>& forbidden = {});
// One-dimension-lower object on V(z); z must be a coordinate of n.I2's ring
// after applying the changes returned by maximal_contact.
MarkedChart descend(const NiceObject& n, const std::string& z);

bool singular(const MarkedChart& c);
Evaluation evaluate(const MarkedChart& c, const History& h, ChartTree* stats = nullptr,
                    const std::shared_ptr<const LevelNode>& chain = nullptr);

// Apply a list of coordinate changes to a chart.
MarkedChart apply_changes(const MarkedChart& c, const std::vector<CoordinateChange>& changes);
// Ideal of a center in the coordinates before the changes.
Ideal center_ideal(const std::vector<std::string>& vars, const std::vector<std::string>& center,
                   const std::vector<CoordinateChange>& changes);

// Changes chosen at descent level >= `level` applied to an inductive object.
MarkedChart change_level(const MarkedChart& obj, const std::vector<CoordinateChange>& changes, int level);
// Stored inductive objects carried to the blow-up chart of vk.
std::shared_ptr<const LevelNode> transform_chain(const std::shared_ptr<const LevelNode>& n,
                                                 const std::vector<std::string>& parent_center, const std::string& vk,
                                                 int birth, const std::vector<CoordinateChange>& changes, int level);
// Product of the exceptional divisors born after c.start, with exponents c.a.
Poly exceptional_monomial(const MarkedChart& c);

ChartTree resolve(const MarkedChart& root, const Caps& caps = {});
// Same driver; fills `out` step by step so that a partial history survives
// an exception.
void resolve_into(const MarkedChart& root, const Caps& caps, ChartTree& out);

// b = 1, stopped at the first index with max(omega) = 0.
ChartTree principalize(const MarkedChart& root, const Caps& caps = {});
// Leaf total transforms monomial in the divisor variables.
bool principalized(const ChartTree& t);

// Resolution of (W, X, 1, E) stopped at the first index where the strict
// transform of X is smooth and has normal crossings with E.
ChartTree resolve_embedded(const Ideal& X, const MarkedChart& ambient, const Caps& caps = {});
bool strict_transform_nc(const MarkedChart& c);

// Whether a and b first differ where one has a t-pair and the other a
// monomial entry.
bool regime_transition(const RFValue& a, const RFValue& b);
// Step pairs (j, j+1) inside one regime where max(g) fails to drop.
std::vector<int> monotonicity_violations(const ChartTree& t);
std::vector<int> regime_transitions(const ChartTree& t);

}  // namespace rk
