#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "biewos/config.hpp"
#include "biewos/geometry.hpp"

namespace biewos {

inline constexpr const char* kVersion = "biewos 1.0.0";

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::string mesh_dump_path; // biewos_patch only
};

struct RunRecord {
    std::string method;
    std::string schema;
    std::vector<std::string> columns;
    std::vector<std::vector<Real>> rows;
    Real wall_seconds = 0;
    Real paths_total = 0;
    std::string csv_text;  // deterministic: config echo + rows, no timings
    std::string json_text; // full record including timings
};

Scene scene_from_config(const RawConfig& cfg);

// Execute the configured method; rows are fully determined by the config
// (including seed), timings land only in the JSON record.
RunRecord run(const RawConfig& cfg, const RunOverrides& ov = {});

// Write csv/json files named in [output]; missing keys skip quietly.
void write_outputs(const RunRecord& rec, const RawConfig& cfg);

// Relative per-cell comparison of two CSV files with matching schemas.
// Returns 0 on pass, 1 on any violation; diagnostics go to report.
int compare_csv(const std::string& file_a, const std::string& file_b, Real tol,
                std::ostream& report);

} // namespace biewos
