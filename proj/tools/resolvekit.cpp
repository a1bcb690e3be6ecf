// resolvekit <resolve|principalize|embedded|family> --input spec.json --out report.json
#include "spec_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) return false;
    out << text;
    return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Algorithmic resolution of marked ideals and equiresolution checks"};
    app.set_version_flag("--version", RESOLVEKIT_VERSION);
    app.require_subcommand(1);

    std::string input, out_path, dot_path, samples;
    int truncation = 0, max_steps = -1;
    for (const char* name : {"resolve", "principalize", "embedded", "family"}) {
        auto* sub = app.add_subcommand(name, std::string("run in ") + name + " mode");
        sub->add_option("--input", input, "problem file (JSON)")->required();
        sub->add_option("--out", out_path, "report file (JSON)")->required();
        sub->add_option("--dot", dot_path, "chart tree in DOT format");
        sub->add_option("--samples", samples, "comma separated rational sample points");
        sub->add_option("--truncation", truncation, "truncation order for condition E")->check(CLI::PositiveNumber);
        sub->add_option("--max-steps", max_steps, "step cap")->check(CLI::NonNegativeNumber);
    }
    CLI11_PARSE(app, argc, argv);

    rk::cli::ProblemSpec spec;
    try {
        spec = rk::cli::parse_spec(input);
        spec.mode = *rk::cli::mode_from(app.get_subcommands().front()->get_name());
        if (spec.mode == rk::cli::Mode::Family && !spec.base)
            throw rk::cli::SpecError("base: family mode requires a base variable");
        if (!samples.empty()) spec.samples = rk::cli::parse_samples(samples);
        if (truncation > 0) spec.truncation = truncation;
        if (max_steps >= 0) spec.max_steps = max_steps;
    } catch (const rk::cli::SpecError& e) {
        std::cerr << "resolvekit: " << input << ": " << e.what() << "\n";
        return 1;
    }

    rk::cli::RunResult r = rk::cli::run(spec);
    if (!write_file(out_path, r.report.dump(2) + "\n")) {
        std::cerr << "resolvekit: cannot write " << out_path << "\n";
        return 1;
    }
    if (!dot_path.empty() && !r.dot.empty() && !write_file(dot_path, r.dot)) {
        std::cerr << "resolvekit: cannot write " << dot_path << "\n";
        return 1;
    }
    if (r.exit_code != 0) std::cerr << "resolvekit: " << r.report["error"]["message"].get<std::string>() << "\n";
    return r.exit_code;
}
