#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

namespace gaspipe {

using ScalarFn = std::function<double(double)>;

/// Physical parameters of a single horizontal isothermal pipe.
///
/// `alpha` lumps the Darcy friction factor, sound speed and diameter
/// (alpha = f c_s^2 / d). A dimensionless pipe has length, sound speed and
/// reference pressure equal to one; only alpha carries information.
struct PipeModel {
    double length = 1.0;        // m
    double alpha = 1.0;         // m/s^2
    double sound_speed = 1.0;   // m/s
    double ref_pressure = 1.0;  // Pa

    void validate() const;

    /// Exponential growth-rate coefficient c_s^2 / sqrt(2 alpha).
    double growth_coefficient() const;

    static PipeModel dimensionless(double alpha_dimless);
};

struct ScalingUnits {
    double time_unit = 1.0;      // s
    double length_unit = 1.0;    // m
    double pressure_unit = 1.0;  // Pa
    double flux_unit = 1.0;      // kg/(m^2 s)
    double alpha_dimless = 1.0;

    // Conversions for the two schedule parameters.
    double lambda_unit() const;  // 1/m^(3/2)
    double g_unit() const;       // 1/m
};

ScalingUnits make_scaling(const PipeModel& pipe, double time_unit);

/// The time-dependent parameters (lambda, G0) of the adiabatic family.
///
/// Invariants: g0(t) > 0 at every queried time, lambda_cumulative(0) = 0.
struct ParameterSchedule {
    ScalarFn lambda;
    ScalarFn g0;
    ScalarFn lambda_dot;
    ScalarFn g0_dot;
    ScalarFn lambda_cumulative;

    // Set when lambda and G0 are constant; lets callers skip derivative work.
    bool frozen = false;
};

ParameterSchedule frozen_schedule(double lambda, double g0);

/// lambda(t) = lambda0 (2 + cos(2 pi t / tau)) cos(pi t / tau), G0 constant.
ParameterSchedule modulated_schedule(double lambda0, double tau, double g0);

/// Same schedule on a time axis stretched by `factor` (t -> t / factor).
ParameterSchedule stretch(const ParameterSchedule& schedule, double factor);

/// Fills missing derivatives by central differences with step `h`.
ParameterSchedule with_numeric_derivatives(ParameterSchedule schedule, double h);

enum class BcKind { PP, PPHI };

std::string_view to_string(BcKind kind);
BcKind parse_bc_kind(std::string_view text);

/// Boundary data: inlet pressure plus outlet pressure (PP) or outlet mass
/// flux (PPHI). Derivative series are optional.
struct BoundarySpec {
    BcKind kind = BcKind::PP;
    ScalarFn left;
    ScalarFn right;
    ScalarFn left_dot;
    ScalarFn right_dot;
};

struct FieldSnapshot {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> p;
    std::vector<double> phi;

    void validate() const;
    std::size_t size() const { return x.size(); }
};

std::vector<double> uniform_grid(double length, std::size_t points);

/// Default number of grid points.
inline constexpr std::size_t kDefaultGridPoints = 201;

FieldSnapshot to_dimensionless(const FieldSnapshot& snapshot, const ScalingUnits& units);
FieldSnapshot to_dimensional(const FieldSnapshot& snapshot, const ScalingUnits& units);

}  // namespace gaspipe
