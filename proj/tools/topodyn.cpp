#include <algorithm>
#include <filesystem>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topodyn/cli/analysis.hpp"

namespace {

using namespace topodyn;
using namespace topodyn::cli;

enum Exit { exit_clean = 0, exit_usage = 1, exit_violations = 2, exit_resource = 3 };

std::vector<SystemSpec> load_specs(const std::string& arg)
{
    if (arg.rfind("builtin:", 0) == 0 || arg.rfind("sft:", 0) == 0) {
        return {parse_inline_spec(arg, std::filesystem::current_path())};
    }
    return load_config(arg);
}

int analyze(const std::string& arg, const RunSettings& settings, bool machine_only)
{
    std::vector<SystemSpec> specs;
    try {
        specs = load_specs(arg);
    } catch (const ParseError& e) {
        std::cerr << arg << ":" << e.what() << '\n';
        return exit_usage;
    }
    std::sort(specs.begin(), specs.end(), [](const auto& a, const auto& b) { return a.name < b.name; });

    std::vector<std::future<Report>> jobs;
    jobs.reserve(specs.size());
    for (const auto& spec : specs) {
        jobs.push_back(std::async(std::launch::async, [&spec, &settings] { return run_analysis(spec, settings); }));
    }

    int status = exit_clean;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        try {
            Report r = jobs[i].get();
            if (!machine_only) {
                emit_human(std::cout, r);
                std::cout << '\n';
            }
            emit_machine(std::cout, r);
            if (!r.violations.empty() && status == exit_clean) {
                status = exit_violations;
            }
        } catch (const ResourceError& e) {
            std::cerr << specs[i].name << ": resource cap exceeded in " << e.operation() << ": " << e.what() << '\n';
            status = exit_resource;
        } catch (const ParseError& e) {
            std::cerr << arg << ":" << e.what() << '\n';
            status = std::max<int>(status, exit_usage);
        } catch (const std::exception& e) {
            std::cerr << specs[i].name << ": " << e.what() << '\n';
            status = std::max<int>(status, exit_usage);
        }
    }
    return status;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Topological dynamics classifier for semigroup actions"};
    app.require_subcommand(1);

    RunSettings settings;
    std::uint64_t horizon = 0;
    std::uint64_t eps_levels = 0;
    bool machine_only = false;
    app.add_option("--seed", settings.seed, "Base seed for sampling")->capture_default_str();
    app.add_option("--horizon", horizon, "Override the sampled horizon");
    app.add_option("--eps-levels", eps_levels, "Number of eps levels for point probes");
    app.add_flag("--machine-only", machine_only, "Emit only the machine-readable pane");
    app.add_option("--max-evals", settings.limits.max_evals, "Hard cap on map evaluations per operation")
        ->capture_default_str();

    std::string spec_file;
    auto* analyze_cmd = app.add_subcommand("analyze", "Classify the systems in a config file or an inline spec");
    analyze_cmd->add_option("spec", spec_file, "Config file, or builtin:<id> / sft:<path> with key=value overrides")
        ->required();
    auto* list_cmd = app.add_subcommand("list", "List built-in systems");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_clean : exit_usage;
    }
    if (horizon > 0) {
        settings.horizon = horizon;
    }
    if (eps_levels > 0) {
        settings.eps_levels = eps_levels;
    }

    if (list_cmd->parsed()) {
        for (const auto& b : registry_list()) {
            std::cout << b.id << '\t' << (b.symbolic ? "symbolic" : "numeric") << '\t' << b.description << '\n';
        }
        return exit_clean;
    }
    if (analyze_cmd->parsed()) {
        return analyze(spec_file, settings, machine_only);
    }
    return exit_usage;
}
