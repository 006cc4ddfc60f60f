#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "gaspipe/model.hpp"
#include "gaspipe/profile.hpp"
#include "gaspipe/reference_solver.hpp"

namespace gaspipe {

enum class ScheduleKind { Modulated, Frozen };

/// A fully resolved scenario. Quantities are stored in the units of `mode`:
/// SI for a dimensional config, scaled units otherwise.
struct ScenarioConfig {
    bool dimensional = false;
    // Write outputs in scaled units even for a dimensional config.
    bool dimensionless_output = false;

    PipeModel pipe = PipeModel::dimensionless(8.57);
    double time_unit = 1.0;

    ScheduleKind schedule = ScheduleKind::Modulated;
    double lambda0 = 0.05;
    double tau = 2.0;
    double g0 = 0.3;
    double stretch = 1.0;

    std::vector<BcKind> bc_kinds{BcKind::PP, BcKind::PPHI};

    std::size_t nx = kDefaultGridPoints;
    double dt = 1e-3;
    double t_end = 5.0;
    double output_dt = 0.01;
    std::vector<double> probes{0.5};
    std::vector<double> snapshot_times{};
    // Time step of the linearized correction; 0 means `dt`.
    double linearized_dt = 0.0;

    ReferenceOptions reference{};
    ProfileOptions profile{};

    std::vector<std::size_t> convergence_grids{201, 401, 801};

    std::filesystem::path results_dir = "results";

    // Canonical "section.key" -> value list (sorted) and its FNV-1a hash (output.dir excluded).
    std::vector<std::pair<std::string, std::string>> canonical;
    std::uint64_t hash = 0;
};

/// A "section.key=value" override as given on the command line.
struct ConfigOverride {
    std::string key;
    std::string value;
};

ConfigOverride parse_override(const std::string& text);

/// Parses INI text. Every numeric value with a physical dimension carries a
/// bracketed unit, e.g. `length = 100 [km]`; scaled quantities use `[1]`.
/// Throws ConfigError on unknown keys, bad numbers, missing or wrong units.
ScenarioConfig parse_config(const std::string& text, const std::vector<ConfigOverride>& overrides = {});

ScenarioConfig load_config(const std::filesystem::path& path,
                           const std::vector<ConfigOverride>& overrides = {});

/// Default scenario, as it would be parsed from an empty file.
ScenarioConfig default_config();

std::uint64_t fnv1a64(std::string_view data);
std::string hash_hex(std::uint64_t hash);

/// The same scenario in scaled units (identity for dimensionless configs).
struct ScaledScenario {
    PipeModel pipe;
    ScalingUnits units;
    ParameterSchedule schedule;
    double dt;
    double t_end;
    double output_dt;
    double linearized_dt;
    std::vector<double> probes;
    std::vector<double> snapshot_times;
};

ScaledScenario scale(const ScenarioConfig& config);

}  // namespace gaspipe
