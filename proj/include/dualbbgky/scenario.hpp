#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "dualbbgky/checks.hpp"

namespace dualbbgky {

/// A fully validated run description. Fixed seed plus deterministic
/// mode means byte-identical reports on repeated runs.
struct Scenario {
    SystemSpec system;
    std::string system_source;  // "preset:<name>" or "inline"
    std::uint64_t seed = 42;
    std::vector<double> times;
    std::vector<double> gammas;
    std::vector<std::string> checks;  // resolved; never empty
    std::map<std::string, double> tolerance_overrides;
    bool deterministic = true;
    nlohmann::json echo;  // the validated config, defaults filled in
};

/// Built-in systems: "free" (no potentials), "pair-zz" (diagonal pair
/// coupling), "pair-triple-random" (fixed-seed random 2- and 3-body).
SystemSpec::Config preset_config(const std::string& name, int truncation_override = -1);
std::vector<std::string> preset_names();

Scenario scenario_from_json(const nlohmann::json& config);
Scenario load_scenario(const std::string& path);

struct VerificationReport {
    int schema_version = 1;
    std::string engine_version = kEngineVersion;
    nlohmann::json scenario;  // echo of the run configuration
    std::vector<CheckRecord> records;

    bool all_passed() const;
};

/// Execute every requested check; failing checks are recorded, never
/// thrown. Only infrastructure problems (capacity, I/O) abort.
VerificationReport run_scenario(const Scenario& scenario);

enum class ReportFormat { Json, Text };

std::string emit_report(const VerificationReport& report, ReportFormat format);

/// Inverse of the JSON emitter; parse(emit(r)) reproduces r.
VerificationReport parse_report_json(const std::string& text);

/// Columnar plot data: residual-vs-time and ratio-vs-gamma tables
/// extracted from the records. Returns {filename -> contents}.
std::map<std::string, std::string> plot_data(const VerificationReport& report);

}  // namespace dualbbgky
