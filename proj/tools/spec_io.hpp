// Problem files and reports for the resolvekit command line tool.
#pragma once

#include "resolvekit/families.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rk::cli {

// Invalid problem file; the message names the offending field or position.
struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Mode { Resolve, Principalize, Embedded, Family };
const char* mode_name(Mode m);
std::optional<Mode> mode_from(const std::string& s);

struct ProblemSpec {
    std::vector<std::string> vars;  // fiber variables
    std::optional<std::string> base;
    std::vector<std::string> generators;
    int b = 1;
    std::vector<std::string> E;
    Mode mode = Mode::Resolve;
    std::vector<Q> samples{0, 1, -1};
    int truncation = 2;
    std::vector<std::string> conditions{"R", "A", "F", "C", "tau", "E"};
    int max_steps = 64;

    // Ring variables: the base first, then the fiber variables.
    std::vector<std::string> ring() const;
    nlohmann::json to_json() const;
};

ProblemSpec parse_spec_text(const std::string& text);
ProblemSpec parse_spec(const std::string& path);
std::vector<Q> parse_samples(const std::string& csv);

struct RunResult {
    int exit_code = 0;
    nlohmann::json report;
    std::string dot;  // empty for family mode
};

// Exit codes: 0 computed, 1 input error, 2 resource cap, 3 invariant violation.
RunResult run(const ProblemSpec& spec);

}  // namespace rk::cli
