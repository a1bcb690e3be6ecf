#include "resolvekit/chart_tree.hpp"

#include <sstream>

namespace rk {

const char* regime_name(StepRecord::Regime r) {
    return r == StepRecord::TRegime ? "t" : "monomial";
}

int ChartTree::add_root(MarkedChart c) {
    TreeNode n;
    n.id = static_cast<int>(nodes.size());
    n.chart = std::move(c);
    nodes.push_back(std::move(n));
    active.push_back(nodes.back().id);
    return nodes.back().id;
}

int ChartTree::add_child(int parent, MarkedChart c, const std::string& tag, const std::string& chart_var, int step) {
    TreeNode n;
    n.id = static_cast<int>(nodes.size());
    n.parent = parent;
    n.step = step;
    n.chart = std::move(c);
    n.center_tag = tag;
    n.chart_var = chart_var;
    nodes.push_back(std::move(n));
    return nodes.back().id;
}

namespace {

nlohmann::json chart_json(const MarkedChart& c) {
    nlohmann::json j;
    j["vars"] = c.vars;
    j["base"] = c.base.names;
    j["I"] = c.I.str();
    j["b"] = c.b;
    j["Ibar"] = c.Ibar.str();
    auto E = nlohmann::json::array();
    for (const auto& d : c.E) E.push_back({{"var", d.var}, {"birth", d.birth}, {"index", d.index}});
    j["E"] = E;
    auto a = nlohmann::json::object();
    for (const auto& [birth, e] : c.a) a[std::to_string(birth)] = e;
    j["a"] = a;
    auto m = nlohmann::json::object();
    for (const auto& [v, p] : c.chart_map) m[v] = p.str();
    j["chart_map"] = m;
    return j;
}

std::string dot_escape(const std::string& s) {
    std::string r;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') r += '\\';
        r += ch;
    }
    return r;
}

}  // namespace

nlohmann::json ChartTree::to_json() const {
    nlohmann::json j;
    auto ns = nlohmann::json::array();
    for (const auto& n : nodes) {
        nlohmann::json x;
        x["id"] = n.id;
        x["parent"] = n.parent;
        x["step"] = n.step;
        x["center_tag"] = n.center_tag;
        x["chart_var"] = n.chart_var;
        x["chart"] = chart_json(n.chart);
        x["max"] = n.value ? n.value->str() : "";
        x["blown_up"] = n.blown_up;
        ns.push_back(x);
    }
    j["nodes"] = ns;
    auto ss = nlohmann::json::array();
    for (const auto& s : steps) {
        nlohmann::json x;
        x["step"] = s.step;
        x["max"] = s.max.str();
        x["regime"] = regime_name(s.regime);
        x["tag"] = s.tag;
        auto cs = nlohmann::json::array();
        for (const auto& c : s.centers) {
            nlohmann::json y;
            y["node"] = c.node;
            y["vars"] = c.vars;
            y["divided"] = c.divided;
            auto ch = nlohmann::json::array();
            for (const auto& k : c.changes) ch.push_back({{"var", k.var}, {"image", k.image.str()}});
            y["changes"] = ch;
            cs.push_back(y);
        }
        x["centers"] = cs;
        ss.push_back(x);
    }
    j["steps"] = ss;
    j["leaves"] = active;
    j["stop_reason"] = stop_reason;
    j["checks"] = {{"nice_objects", nice_checks}, {"descents", descent_checks}};
    return j;
}

std::string ChartTree::to_dot() const {
    std::ostringstream os;
    os << "digraph charts {\n  node [shape=box];\n";
    for (const auto& n : nodes) {
        std::string label = "(" + n.chart.describe() + "; " + (n.value ? n.value->str() : "-") + ")";
        os << "  n" << n.id << " [label=\"" << dot_escape(label) << "\"];\n";
    }
    for (const auto& n : nodes)
        if (n.parent >= 0)
            os << "  n" << n.parent << " -> n" << n.id << " [label=\"" << dot_escape(n.center_tag + ":" + n.chart_var)
               << "\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace rk
