#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "germflow/errors.hpp"
#include "job.hpp"

namespace {

using germflow::cli::Json;

int run_cli(int argc, char** argv) {
    CLI::App app{"germflow: numerically probes gradient-dominance conditions, trivializing "
                 "vector fields and their flows, and Malgrange's condition at infinity for "
                 "one-parameter polynomial deformations F(x,t) = f(x) + t g(x)"};
    app.require_subcommand(1);

    std::string spec_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    bool plots = false;
    bool validate_only = false;
    std::string f_text, g_text, poly_text, field_name;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--spec", spec_path, "job spec file (JSON)")->required();
        cmd->add_option("--seed", seed, "override the spec's seed")->each([&](const std::string&) {
            seed_set = true;
        });
        cmd->add_option("--out", out_dir, "override the spec's output directory");
        cmd->add_flag("--plots", plots, "emit SVG plots");
        cmd->add_flag("--validate-only", validate_only, "validate the spec and exit");
        // quick-run overrides mirroring the top-level spec fields
        cmd->add_option("--field", field_name, "override the coefficient field (real|complex)");
        cmd->add_option("--f", f_text, "override family.f");
        cmd->add_option("--g", g_text, "override family.g");
        cmd->add_option("--polynomial", poly_text, "override the polynomial (malgrange/scan)");
    };

    for (const char* name : {"check", "exponent", "flow", "malgrange", "scan", "report-all"})
        add_common(app.add_subcommand(name));

    CLI11_PARSE(app, argc, argv);
    const std::string task = app.get_subcommands().front()->get_name();

    std::ifstream in(spec_path);
    if (!in) {
        std::fprintf(stderr, "error: cannot open spec file '%s'\n", spec_path.c_str());
        return 1;
    }
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        std::fprintf(stderr, "error: %s: %s\n", spec_path.c_str(), e.what());
        return 1;
    }

    doc["task"] = task;
    if (seed_set) doc["seed"] = seed;
    if (!out_dir.empty()) doc["out"] = out_dir;
    if (plots) doc["plots"] = true;
    if (!field_name.empty()) doc["field"] = field_name;
    if (!f_text.empty()) doc["family"]["f"] = f_text;
    if (!g_text.empty()) doc["family"]["g"] = g_text;
    if (!poly_text.empty()) doc["polynomial"] = poly_text;

    germflow::cli::JobSpec spec;
    try {
        spec = germflow::cli::parse_job_spec(doc);
    } catch (const germflow::ParseError& e) {
        std::fprintf(stderr, "error: %s:%d:%d: %s\n", spec_path.c_str(), e.line, e.column, e.what());
        return 1;
    } catch (const germflow::InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: malformed spec: %s\n", e.what());
        return 1;
    }

    const std::vector<germflow::cli::Diagnostic> diags = germflow::cli::validate(spec);
    if (!diags.empty()) {
        for (const auto& d : diags)
            std::fprintf(stderr, "error: %s: %s\n", d.path.c_str(), d.message.c_str());
        return 1;
    }
    if (validate_only) {
        std::printf("spec ok\n");
        return 0;
    }

    try {
        const germflow::cli::RunResult result = germflow::cli::run(spec);
        for (const std::string& file : result.written_files) std::printf("wrote %s\n", file.c_str());
        return result.exit_code;
    } catch (const germflow::InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
