// Resolution history: charts, blow-up edges and per-step maxima.
#pragma once

#include "resolvekit/chart.hpp"
#include "resolvekit/rfvalue.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rk {

struct CoordinateChange {
    int level = 0;  // descent level at which the change was chosen
    std::string var;
    Poly image;    // var -> image
    Poly inverse;  // the new coordinate var in terms of the old ones
};

// Inductive object on a maximal contact hypersurface V(z), kept along the
// run of steps where the value above it stays constant.
struct LevelNode {
    MarkedChart obj;  // ring of the parent level minus z
    std::string z;
    Q omega = 0;  // t-value and piece of the parent level it belongs to
    int nbar = 0;
    std::vector<std::string> piece;
    int created = 0;
    std::shared_ptr<const LevelNode> child;
};

struct TreeNode {
    int id = 0;
    int parent = -1;
    int step = 0;  // index of the chart in the sequence B_0, B_1, ...
    MarkedChart chart;
    std::string center_tag;  // tag of the center whose blow-up produced this chart
    std::string chart_var;   // exceptional variable of this chart ("" for root)
    std::optional<RFValue> value;  // local maximum when the chart was evaluated
    bool blown_up = false;
    std::shared_ptr<const LevelNode> chain;  // inductive objects inherited from the parent
};

struct StepCenter {
    int node = 0;
    std::vector<std::string> vars;
    std::vector<CoordinateChange> changes;
    bool divided = false;  // codimension-one center, no blow-up
    std::shared_ptr<const LevelNode> chain;  // inductive objects behind the center
};

struct StepRecord {
    int step = 0;
    RFValue max;
    enum Regime { TRegime, MonomialRegime } regime = TRegime;
    std::string tag;
    std::vector<int> charts;  // charts of B_step
    std::vector<StepCenter> centers;
};

class ChartTree {
public:
    int add_root(MarkedChart c);
    int add_child(int parent, MarkedChart c, const std::string& tag, const std::string& chart_var, int step);

    std::vector<TreeNode> nodes;
    std::vector<StepRecord> steps;
    std::vector<int> active;  // leaves of the current sequence
    std::string stop_reason;

    // Counters of verified identities (nice objects, descents).
    int nice_checks = 0;
    int descent_checks = 0;

    const TreeNode& node(int id) const { return nodes.at(static_cast<size_t>(id)); }
    std::vector<int> leaves() const { return active; }
    int length() const { return static_cast<int>(steps.size()); }

    nlohmann::json to_json() const;
    std::string to_dot() const;
};

const char* regime_name(StepRecord::Regime r);

}  // namespace rk
