#include "dualbbgky/scenario.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dualbbgky/random.hpp"

namespace dualbbgky {

namespace {

using nlohmann::json;

constexpr std::uint64_t kPresetSeed = 0x9e3779b97f4a7c15ull;

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

Matrix matrix_from_json(const json& rows, const std::string& field) {
    if (!rows.is_array() || rows.empty())
        throw ValidationError(field + ": expected a nonempty array of rows");
    const auto n = static_cast<Eigen::Index>(rows.size());
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const json& row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            throw ValidationError(field + ": row " + std::to_string(r) + " must have " +
                                  std::to_string(n) + " entries (square matrix)");
        for (Eigen::Index c = 0; c < n; ++c) {
            const json& entry = row[static_cast<std::size_t>(c)];
            if (entry.is_number()) {
                m(r, c) = Complex(entry.get<double>(), 0.0);
            } else if (entry.is_array() && entry.size() == 2 && entry[0].is_number() &&
                       entry[1].is_number()) {
                m(r, c) = Complex(entry[0].get<double>(), entry[1].get<double>());
            } else {
                throw ValidationError(field + ": entry (" + std::to_string(r) + "," + std::to_string(c) +
                                      ") must be a number or an [re, im] pair");
            }
        }
    }
    return m;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        if (!ok) throw ValidationError(where + ": unknown field '" + key + "'");
    }
}

SystemSpec::Config system_config_from_json(const json& sys, std::string& source) {
    if (!sys.is_object()) throw ValidationError("system: expected an object");
    if (sys.contains("preset")) {
        reject_unknown_keys(sys, {"preset", "N"}, "system");
        const std::string name = sys.at("preset").get<std::string>();
        int order = -1;
        if (sys.contains("N")) order = sys.at("N").get<int>();
        source = "preset:" + name;
        return preset_config(name, order);
    }
    reject_unknown_keys(sys, {"d", "N", "h1", "hbar", "potentials", "symmetrize_potentials"}, "system");
    source = "inline";
    SystemSpec::Config config;
    if (!sys.contains("d") || !sys.contains("N") || !sys.contains("h1"))
        throw ValidationError("system: inline definition needs fields d, N and h1");
    config.site_dim = sys.at("d").get<int>();
    config.truncation_order = sys.at("N").get<int>();
    config.one_body = matrix_from_json(sys.at("h1"), "system.h1");
    if (sys.contains("hbar")) config.hbar = sys.at("hbar").get<double>();
    if (sys.contains("symmetrize_potentials"))
        config.symmetrize_potentials = sys.at("symmetrize_potentials").get<bool>();
    if (sys.contains("potentials")) {
        const json& pots = sys.at("potentials");
        if (!pots.is_array()) throw ValidationError("system.potentials: expected an array");
        for (std::size_t i = 0; i < pots.size(); ++i) {
            const json& p = pots[i];
            reject_unknown_keys(p, {"k", "matrix"}, "system.potentials[" + std::to_string(i) + "]");
            if (!p.contains("k") || !p.contains("matrix"))
                throw ValidationError("system.potentials[" + std::to_string(i) +
                                      "]: needs fields k and matrix");
            config.potentials.emplace_back(
                p.at("k").get<int>(),
                matrix_from_json(p.at("matrix"), "system.potentials[" + std::to_string(i) + "].matrix"));
        }
    }
    return config;
}

json system_config_to_json(const SystemSpec& spec, const std::string& source) {
    if (source.starts_with("preset:")) {
        json out;
        out["preset"] = source.substr(7);
        out["N"] = spec.truncation_order();
        return out;
    }
    json out;
    out["d"] = spec.site_dim();
    out["N"] = spec.truncation_order();
    out["hbar"] = spec.hbar();
    out["h1"] = matrix_to_json(spec.one_body().matrix());
    json pots = json::array();
    for (const auto& p : spec.potentials())
        pots.push_back(json{{"k", p.body_order}, {"matrix", matrix_to_json(p.matrix.matrix())}});
    out["potentials"] = std::move(pots);
    return out;
}

}  // namespace

SystemSpec::Config preset_config(const std::string& name, int truncation_override) {
    const int order = truncation_override > 0 ? truncation_override : 3;
    SystemSpec::Config config;
    config.site_dim = 2;
    config.truncation_order = order;
    config.one_body = Matrix(2, 2);
    config.one_body << Complex(0.5, 0.0), Complex(0.2, 0.0), Complex(0.2, 0.0), Complex(-0.5, 0.0);

    if (name == "free") {
        return config;
    }
    if (name == "pair-zz") {
        if (order >= 2) {
            Matrix zz = Matrix::Zero(4, 4);
            zz(0, 0) = 0.4;
            zz(1, 1) = -0.4;
            zz(2, 2) = -0.4;
            zz(3, 3) = 0.4;
            config.potentials.emplace_back(2, std::move(zz));
        }
        return config;
    }
    if (name == "pair+triple-random") {
        Rng rng(kPresetSeed);
        SystemSpec::Config random = random_system_config(rng, 2, order, order >= 3, 0.5);
        random.one_body = config.one_body;
        return random;
    }
    throw ValidationError("system.preset: unknown preset '" + name +
                          "' (valid: free, pair-zz, pair+triple-random)");
}

std::vector<std::string> preset_names() { return {"free", "pair-zz", "pair+triple-random"}; }

Scenario scenario_from_json(const json& config) {
    if (!config.is_object()) throw ValidationError("scenario: expected a JSON object");
    reject_unknown_keys(config,
                        {"schema_version", "system", "seed", "times", "gamma_values", "checks",
                         "tolerance_overrides", "deterministic"},
                        "scenario");
    if (config.contains("schema_version") && config.at("schema_version").get<int>() != 1)
        throw ValidationError("schema_version: only version 1 is supported");
    if (!config.contains("system")) throw ValidationError("scenario: missing field 'system'");

    std::string source;
    SystemSpec system(system_config_from_json(config.at("system"), source));

    Scenario scenario{std::move(system), source, 42, {0.1, 0.25, 0.7, 1.0}, {0.05, 0.15, 0.3},
                      {},                 {},     true, json()};

    if (config.contains("seed")) scenario.seed = config.at("seed").get<std::uint64_t>();
    if (config.contains("deterministic")) scenario.deterministic = config.at("deterministic").get<bool>();
    if (config.contains("times")) {
        scenario.times = config.at("times").get<std::vector<double>>();
        if (scenario.times.empty()) throw ValidationError("times: must not be empty");
        for (double t : scenario.times)
            if (!std::isfinite(t)) throw ValidationError("times: entries must be finite");
    }
    if (config.contains("gamma_values")) {
        scenario.gammas = config.at("gamma_values").get<std::vector<double>>();
        for (double g : scenario.gammas)
            if (!(g > 0.0 && g < 1.0)) throw ValidationError("gamma_values: entries must lie in (0,1)");
    }
    if (config.contains("checks") && !config.at("checks").empty()) {
        scenario.checks = config.at("checks").get<std::vector<std::string>>();
        for (const auto& id : scenario.checks) {
            if (find_check(id) == nullptr) {
                std::string valid;
                for (const auto& known : check_ids()) valid += (valid.empty() ? "" : ", ") + known;
                throw ValidationError("checks: unknown check id '" + id + "' (valid ids: " + valid + ")");
            }
        }
    } else {
        scenario.checks = check_ids();
    }
    if (config.contains("tolerance_overrides")) {
        const json& overrides = config.at("tolerance_overrides");
        if (!overrides.is_object()) throw ValidationError("tolerance_overrides: expected an object");
        for (const auto& [id, value] : overrides.items()) {
            if (find_check(id) == nullptr)
                throw ValidationError("tolerance_overrides: unknown check id '" + id + "'");
            if (!value.is_number() || !(value.get<double>() >= 0.0))
                throw ValidationError("tolerance_overrides['" + id + "']: expected a nonnegative number");
            scenario.tolerance_overrides[id] = value.get<double>();
        }
    }

    json echo;
    echo["schema_version"] = 1;
    echo["system"] = system_config_to_json(scenario.system, scenario.system_source);
    echo["seed"] = scenario.seed;
    echo["times"] = scenario.times;
    echo["gamma_values"] = scenario.gammas;
    echo["checks"] = scenario.checks;
    echo["tolerance_overrides"] = scenario.tolerance_overrides;
    echo["deterministic"] = scenario.deterministic;
    scenario.echo = std::move(echo);
    return scenario;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open scenario file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    json config;
    try {
        config = json::parse(text);
    } catch (const json::parse_error& e) {
        // translate the byte offset into line/column
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ValidationError(path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                              ": JSON parse error: " + e.what());
    }
    return scenario_from_json(config);
}

bool VerificationReport::all_passed() const {
    for (const auto& r : records)
        if (!r.passed) return false;
    return true;
}

VerificationReport run_scenario(const Scenario& scenario) {
    VerificationReport report;
    report.scenario = scenario.echo;
    for (const auto& id : scenario.checks) {
        const CheckDef* def = find_check(id);
        if (def == nullptr) throw ValidationError("run_scenario: unknown check id '" + id + "'");
        double tolerance = def->default_tolerance;
        if (auto it = scenario.tolerance_overrides.find(id); it != scenario.tolerance_overrides.end())
            tolerance = it->second;
        const CheckContext ctx{scenario.system, scenario.seed, scenario.times, scenario.gammas, tolerance};

        const auto started = std::chrono::steady_clock::now();
        std::vector<CheckRecord> records = def->run(ctx);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

        for (auto& r : records) {
            r.check = def->id;
            r.anchor = def->anchor;
            r.passed = r.residual <= r.tolerance;
            r.wall_seconds = scenario.deterministic ? 0.0 : elapsed;
            report.records.push_back(std::move(r));
        }
    }
    return report;
}

namespace {

json report_to_json(const VerificationReport& report) {
    json j;
    j["schema_version"] = report.schema_version;
    j["engine_version"] = report.engine_version;
    j["scenario"] = report.scenario;
    json checks = json::array();
    std::size_t passed = 0;
    double worst_margin = -1.0;
    json worst;
    for (const auto& r : report.records) {
        checks.push_back(json{{"check", r.check},
                              {"anchor", r.anchor},
                              {"params", r.params},
                              {"residual", r.residual},
                              {"tolerance", r.tolerance},
                              {"verdict", r.passed ? "pass" : "fail"},
                              {"wall_seconds", r.wall_seconds}});
        if (r.passed) ++passed;
        const double margin = r.residual / std::max(r.tolerance, 1e-300);
        if (margin > worst_margin) {
            worst_margin = margin;
            worst = json{{"check", r.check}, {"residual", r.residual}, {"tolerance", r.tolerance}};
        }
    }
    j["checks"] = std::move(checks);
    j["summary"] = json{{"records", report.records.size()},
                        {"passed", passed},
                        {"failed", report.records.size() - passed},
                        {"worst", worst.is_null() ? json::object() : worst}};
    return j;
}

}  // namespace

std::string emit_report(const VerificationReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) return report_to_json(report).dump(2) + "\n";

    // text: one line per check family with the worst residual
    struct Family {
        std::size_t records = 0;
        std::size_t failed = 0;
        double worst = 0.0;
        double tolerance = 0.0;
        double wall = 0.0;
        std::string anchor;
    };
    std::vector<std::pair<std::string, Family>> families;
    for (const auto& r : report.records) {
        auto it = std::find_if(families.begin(), families.end(),
                               [&](const auto& f) { return f.first == r.check; });
        if (it == families.end()) {
            families.emplace_back(r.check, Family{});
            it = std::prev(families.end());
            it->second.anchor = r.anchor;
            it->second.wall = r.wall_seconds;
        }
        Family& f = it->second;
        ++f.records;
        if (!r.passed) ++f.failed;
        if (r.residual >= f.worst) {
            f.worst = r.residual;
            f.tolerance = r.tolerance;
        }
    }

    std::ostringstream os;
    os << "dual-bbgky verification report (engine " << report.engine_version << ")\n";
    const auto& sc = report.scenario;
    os << "system: " << (sc.contains("system") ? sc["system"].dump() : "{}")
       << "\nseed: " << sc.value("seed", 0ull)
       << "  deterministic: " << (sc.value("deterministic", true) ? "yes" : "no") << "\n";
    os << std::string(78, '-') << "\n";
    std::size_t families_failed = 0;
    for (const auto& [id, f] : families) {
        const bool ok = f.failed == 0;
        if (!ok) ++families_failed;
        os << (ok ? "PASS " : "FAIL ") << id;
        for (std::size_t i = id.size(); i < 28; ++i) os << ' ';
        os << " records " << f.records << "  worst " << format_double(f.worst) << "  tol "
           << format_double(f.tolerance) << "  wall " << format_double(f.wall) << "s\n";
        os << "       " << f.anchor << "\n";
    }
    os << std::string(78, '-') << "\n";
    os << "summary: " << (families.size() - families_failed) << "/" << families.size()
       << " checks passed, " << report.records.size() << " records, "
       << (report.all_passed() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

VerificationReport parse_report_json(const std::string& text) {
    const json j = json::parse(text);
    VerificationReport report;
    report.schema_version = j.at("schema_version").get<int>();
    report.engine_version = j.at("engine_version").get<std::string>();
    report.scenario = j.at("scenario");
    for (const auto& c : j.at("checks")) {
        CheckRecord r;
        r.check = c.at("check").get<std::string>();
        r.anchor = c.at("anchor").get<std::string>();
        r.params = c.at("params");
        r.residual = c.at("residual").get<double>();
        r.tolerance = c.at("tolerance").get<double>();
        r.passed = c.at("verdict").get<std::string>() == "pass";
        r.wall_seconds = c.at("wall_seconds").get<double>();
        report.records.push_back(std::move(r));
    }
    return report;
}

std::map<std::string, std::string> plot_data(const VerificationReport& report) {
    std::ostringstream by_time;
    by_time << "check\tt\tresidual\ttolerance\n";
    std::ostringstream by_gamma;
    by_gamma << "gamma\tworst_ratio\tbound\n";
    for (const auto& r : report.records) {
        if (r.params.contains("t") && r.params["t"].is_number())
            by_time << r.check << "\t" << r.params["t"].get<double>() << "\t" << r.residual << "\t"
                    << r.tolerance << "\n";
        if (r.check == "norm-estimate" && r.params.contains("gamma"))
            by_gamma << r.params["gamma"].get<double>() << "\t"
                     << r.params.value("worst_ratio", 0.0) << "\t" << r.params.value("bound", 0.0)
                     << "\n";
    }
    return {{"residual_vs_t.tsv", by_time.str()}, {"bound_ratio_vs_gamma.tsv", by_gamma.str()}};
}

}  // namespace dualbbgky
