#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dualbbgky/scenario.hpp"

namespace {

// exit codes: 0 all checks pass, 1 any check failed, 2 configuration or
// capacity error
constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

std::vector<std::string> split_ids(const std::string& csv) {
    std::vector<std::string> out;
    std::string current;
    for (char c : csv) {
        if (c == ',') {
            if (!current.empty()) out.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) out.push_back(current);
    return out;
}

int run_command(const std::string& scenario_path, const std::string& format, const std::string& out_path,
                const std::string& checks_csv, std::optional<std::uint64_t> seed, bool deterministic,
                const std::string& plot_dir) {
    dualbbgky::Scenario scenario = dualbbgky::load_scenario(scenario_path);
    if (seed) {
        scenario.seed = *seed;
        scenario.echo["seed"] = *seed;
    }
    if (deterministic) {
        scenario.deterministic = true;
        scenario.echo["deterministic"] = true;
    }
    if (!checks_csv.empty()) {
        scenario.checks = split_ids(checks_csv);
        for (const auto& id : scenario.checks)
            if (dualbbgky::find_check(id) == nullptr)
                throw dualbbgky::ValidationError("--checks: unknown check id '" + id + "'");
        scenario.echo["checks"] = scenario.checks;
    }

    const dualbbgky::VerificationReport report = dualbbgky::run_scenario(scenario);
    const auto fmt = format == "json" ? dualbbgky::ReportFormat::Json : dualbbgky::ReportFormat::Text;
    const std::string rendered = dualbbgky::emit_report(report, fmt);

    if (out_path.empty()) {
        std::cout << rendered;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw dualbbgky::ValidationError("cannot write report to " + out_path);
        out << rendered;
    }

    if (!plot_dir.empty()) {
        std::filesystem::create_directories(plot_dir);
        for (const auto& [name, contents] : dualbbgky::plot_data(report)) {
            std::ofstream out(std::filesystem::path(plot_dir) / name, std::ios::binary);
            if (!out) throw dualbbgky::ValidationError("cannot write plot data under " + plot_dir);
            out << contents;
        }
    }
    return report.all_passed() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual-bbgky: truncated dual-hierarchy verification engine"};
    app.require_subcommand(1);

    std::string scenario_path, format = "text", out_path, checks_csv, plot_dir;
    std::optional<std::uint64_t> seed;
    bool deterministic = false;

    auto* run = app.add_subcommand("run", "execute a scenario and emit its verification report");
    run->add_option("scenario", scenario_path, "scenario file (JSON)")->required();
    run->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
    run->add_option("--out", out_path, "write the report to this path instead of stdout");
    run->add_option("--checks", checks_csv, "comma-separated check ids (default: scenario's list)");
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_flag("--deterministic", deterministic,
                  "force deterministic mode (zeroed wall times, byte-stable reports)");
    run->add_option("--plot-dir", plot_dir, "also emit columnar plot data into this directory");

    auto* list = app.add_subcommand("list-checks", "print every known check id with its meaning");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "validate a scenario file without running it");
    validate->add_option("scenario", validate_path, "scenario file (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitPass : kExitConfig;
    }

    try {
        if (run->parsed())
            return run_command(scenario_path, format, out_path, checks_csv, seed, deterministic, plot_dir);
        if (list->parsed()) {
            for (const auto& def : dualbbgky::check_registry()) {
                std::cout << def.id << "\n    default tolerance: " << def.default_tolerance
                          << "\n    " << def.anchor << "\n";
            }
            return kExitPass;
        }
        if (validate->parsed()) {
            dualbbgky::load_scenario(validate_path);
            std::cout << "OK: " << validate_path << " is a valid scenario\n";
            return kExitPass;
        }
    } catch (const dualbbgky::ValidationError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const dualbbgky::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
