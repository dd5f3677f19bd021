#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "divaudit/demos.hpp"
#include "divaudit/report.hpp"
#include "divaudit/scenario.hpp"
#include "divaudit/synthesis.hpp"

namespace {

constexpr int kExitConfigError = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct Options {
    std::string format = "text";
    int max_universe = 12;
    std::uint64_t max_menu_enum = std::uint64_t{1} << 14;
    std::string tie_break;  // empty: keep the scenario's setting
    int gs_perturb = 2;
    bool timing = false;
};

divaudit::Limits to_limits(const Options& options) {
    divaudit::Limits limits;
    limits.max_universe = options.max_universe;
    limits.max_menu_enum = options.max_menu_enum;
    limits.gs_perturb = options.gs_perturb;
    return limits;
}

divaudit::Scenario load_scenario(const std::string& text, const Options& options) {
    divaudit::Scenario scenario = divaudit::parse_scenario(text);
    if (options.tie_break == "error") {
        scenario.rule.tie_break = divaudit::TieBreak::ErrorOnTie;
    } else if (options.tie_break == "id") {
        scenario.rule.tie_break = divaudit::TieBreak::ByIdAscending;
    }
    return scenario;
}

int run_report(const divaudit::Scenario& scenario, const Options& options) {
    divaudit::Report report = divaudit::run_audits(scenario, to_limits(options));
    if (options.format == "json") {
        std::cout << divaudit::emit_report_json(report, options.timing);
    } else {
        std::cout << divaudit::emit_report_text(report, options.timing);
    }
    return divaudit::report_exit_code(report);
}

int run_synthesize(const divaudit::Scenario& scenario, const Options& options) {
    divaudit::ChoiceRule rule(scenario.rule, scenario.schema, scenario.scores);
    auto result = divaudit::synthesize_separable(rule, scenario.universe,
                                                 to_limits(options).max_menu_enum);
    nlohmann::json out;
    if (result.success()) {
        out["status"] = "success";
        out["utility"] = divaudit::utility_json(*result.utility, scenario.schema,
                                                scenario.scores);
    } else {
        out["status"] = "failure";
        out["reason"] = result.failure->message;
    }
    std::cout << out.dump(2) << "\n";
    return result.success() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"divaudit: rationalizability, substitutes and separable-representation audits "
                 "for capacity-filling choice rules"};
    app.require_subcommand(1);

    Options options;
    app.add_option("--format", options.format, "Report format")
        ->check(CLI::IsMember({"json", "text"}))
        ->envname("DIVAUDIT_FORMAT")
        ->capture_default_str();
    app.add_option("--max-universe", options.max_universe, "Largest universe audited exactly")
        ->envname("DIVAUDIT_MAX_UNIVERSE")
        ->capture_default_str();
    app.add_option("--max-menu-enum", options.max_menu_enum,
                   "Cap on enumerated menus per audit")
        ->envname("DIVAUDIT_MAX_MENU_ENUM")
        ->capture_default_str();
    app.add_option("--tie-break", options.tie_break, "Override the scenario tie handling")
        ->check(CLI::IsMember({"error", "id"}))
        ->envname("DIVAUDIT_TIE_BREAK");
    app.add_option("--gs-perturb", options.gs_perturb,
                   "Individuals lowered per gross-substitutes perturbation")
        ->envname("DIVAUDIT_GS_PERTURB")
        ->capture_default_str();
    app.add_flag("--timing", options.timing, "Emit wall-clock timings (non-deterministic)")
        ->envname("DIVAUDIT_TIMING");

    std::string audit_file, synth_file, demo_name;
    auto* audit_cmd = app.add_subcommand("audit", "Run a scenario file's audits");
    audit_cmd->add_option("file", audit_file, "Scenario file")->required();
    auto* demo_cmd = app.add_subcommand("demo", "Run a built-in scenario");
    demo_cmd->add_option("name", demo_name, "Demo name")->required();
    auto* synth_cmd = app.add_subcommand("synthesize", "Synthesize a separable utility");
    synth_cmd->add_option("file", synth_file, "Scenario file")->required();
    auto* list_cmd = app.add_subcommand("list-demos", "List built-in scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) {
            for (const auto& name : divaudit::demo_names()) std::cout << name << "\n";
            return 0;
        }
        if (audit_cmd->parsed()) {
            return run_report(load_scenario(read_file(audit_file), options), options);
        }
        if (demo_cmd->parsed()) {
            auto text = divaudit::demo_text(demo_name);
            if (!text) {
                std::cerr << "unknown demo '" << demo_name << "'\n";
                return kExitConfigError;
            }
            return run_report(load_scenario(*text, options), options);
        }
        if (synth_cmd->parsed()) {
            return run_synthesize(load_scenario(read_file(synth_file), options), options);
        }
    } catch (const divaudit::ParseError& e) {
        std::cerr << "parse error at " << e.line << ":" << e.column << ": " << e.what();
        if (!e.expected.empty()) std::cerr << " (expected " << e.expected << ")";
        std::cerr << "\n";
        return kExitConfigError;
    } catch (const divaudit::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitConfigError;
}
