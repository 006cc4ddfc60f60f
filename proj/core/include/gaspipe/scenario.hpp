#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gaspipe/config.hpp"
#include "gaspipe/model.hpp"

namespace gaspipe {

enum class Variant { Reference, UaLinearized, UaCorrected, UaBase, BaCorrected, BaBase };

inline constexpr std::array<Variant, 6> kAllVariants{Variant::Reference,   Variant::UaLinearized,
                                                     Variant::UaCorrected, Variant::UaBase,
                                                     Variant::BaCorrected, Variant::BaBase};

std::string_view to_string(Variant v);

/// Probe time series: values[probe][time].
struct TimeSeries {
    std::vector<double> t;
    std::vector<double> probes;
    std::vector<std::vector<double>> p;
    std::vector<std::vector<double>> phi;
};

/// Samples snapshots at probe locations by linear interpolation.
TimeSeries probe_series(const std::vector<FieldSnapshot>& snapshots, const std::vector<double>& probes);

struct ErrorNorms {
    double rel_l2 = 0.0;
    double rel_linf = 0.0;
};

struct ProbeMetrics {
    double probe = 0.0;
    ErrorNorms p;
    ErrorNorms phi;
};

/// Relative discrete L2 and Linf errors of `test` against `reference` over
/// time, per probe and variable:
///   rel_l2 = ||test - ref||_2 / ||ref||_2, rel_linf = max|test - ref| / max|ref|.
/// Throws AlignmentError when time or probe grids differ.
std::vector<ProbeMetrics> error_metrics(const TimeSeries& reference, const TimeSeries& test);

struct VariantOutcome {
    Variant variant = Variant::Reference;
    bool completed = false;
    std::string error;
    TimeSeries series;
    std::vector<FieldSnapshot> fields;  // at the snapshot times
};

struct MetricRecord {
    BcKind kind = BcKind::PP;
    Variant variant = Variant::Reference;
    double probe = 0.0;
    std::string variable;
    ErrorNorms norms;
};

struct BcRun {
    BcKind kind = BcKind::PP;
    std::vector<VariantOutcome> variants;  // in kAllVariants order
    std::vector<MetricRecord> metrics;
    // Largest relative line-pack defect over all reference steps.
    double line_pack_defect = 0.0;
    std::size_t reference_steps = 0;

    const VariantOutcome& get(Variant v) const;
    const MetricRecord* metric(Variant v, const std::string& variable, double probe) const;
};

/// Everything is in scaled units; outputs are converted when written.
struct ScenarioResult {
    std::uint64_t hash = 0;
    ScalingUnits units;
    std::vector<BcRun> runs;

    bool all_completed() const;
    const BcRun& get(BcKind kind) const;
};

/// Output times k * output_dt up to t_end (t_end included).
std::vector<double> output_grid(double output_dt, double t_end);

ScenarioResult run_scenario(const ScenarioConfig& config);

/// Writes <dir>/<bc>/<variant>.csv probe series, <dir>/<bc>/fields/<variant>.csv
/// full snapshots, metrics.csv, manifest.csv and config.resolved.ini.
void write_results(const ScenarioConfig& config, const ScenarioResult& result,
                   const std::filesystem::path& dir);

/// Loads, runs and writes to the config's results directory.
ScenarioResult run(const std::filesystem::path& config_path,
                   const std::vector<ConfigOverride>& overrides = {});

struct ConvergenceLevel {
    std::size_t nx = 0;
    double dt = 0.0;
    double error_l2 = 0.0;  // against the Richardson extrapolant
};

struct ConvergenceStudy {
    BcKind kind = BcKind::PP;
    std::vector<ConvergenceLevel> levels;
    double observed_order = 0.0;
};

/// Reference runs on nested grids with dt scaled by h^2, compared on the
/// coarsest nodes at t_end. Grids must be nested (n_{k+1} - 1 = 2 (n_k - 1)).
std::vector<ConvergenceStudy> convergence_study(const ScenarioConfig& config);

void write_convergence(const ScenarioConfig& config, const std::vector<ConvergenceStudy>& studies,
                       const std::filesystem::path& dir);

}  // namespace gaspipe
