#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dualbbgky/hierarchy.hpp"

namespace dualbbgky {

inline constexpr const char* kEngineVersion = "0.1.0";

/// One measured identity instance: what was checked, at which
/// parameters, how large the residual came out, and the verdict.
struct CheckRecord {
    std::string check;
    std::string anchor;
    nlohmann::json params = nlohmann::json::object();
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    double wall_seconds = 0.0;
};

/// Inputs a check runs against. Checks draw any randomness they need
/// from `seed` through the engine's own generator, so a fixed context
/// reproduces residuals bit-for-bit.
struct CheckContext {
    const SystemSpec& system;
    std::uint64_t seed = 42;
    std::vector<double> times;
    std::vector<double> gammas;
    double tolerance = 0.0;  // resolved default-or-override for this check
};

struct CheckDef {
    std::string id;
    /// Self-describing statement of the identity under test; embedded
    /// verbatim in every report record.
    std::string anchor;
    double default_tolerance;
    std::function<std::vector<CheckRecord>(const CheckContext&)> run;
};

/// All checks the engine knows, in a fixed order.
const std::vector<CheckDef>& check_registry();

const CheckDef* find_check(const std::string& id);

std::vector<std::string> check_ids();

}  // namespace dualbbgky
