#pragma once

#include "stefan1d/json_io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stefan1d {

/// One checked quantity. `relation` is "=" (|computed - expected| <= tolerance),
/// ">" or "<" (strict comparison against expected, tolerance unused).
struct ReproRow {
    std::string quantity;
    std::string source;   // "reported" (published value), "derived" or "trivial"
    std::string relation = "=";
    double expected = 0.0;
    double computed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

struct ReproScenario {
    std::string name;
    Json inputs;
    std::vector<ReproRow> rows;
    bool pass = false;
};

struct ReproManifest {
    std::vector<ReproScenario> scenarios;
    bool pass = false;
};

/// Runs every scenario. A tolerance override replaces each row's tolerance.
ReproManifest build_repro_manifest(std::optional<double> tolerance_override = std::nullopt);

Json to_json(const ReproManifest& manifest);
std::string format_table(const ReproManifest& manifest);

} // namespace stefan1d
