#pragma once

#include <span>

#include "gaspipe/adiabatic_ua.hpp"
#include "gaspipe/corrections.hpp"
#include "gaspipe/model.hpp"
#include "gaspipe/numerics.hpp"

namespace gaspipe {

// Balanced-adiabatic baseline: the stationary solution driven by the
// instantaneous endpoint pressures.

struct Endpoints {
    double p_in = 0.0;
    double p_out = 0.0;
    double p_in_dot = 0.0;
    double p_out_dot = 0.0;
};

/// p_BA(x) = sqrt(p_in^2 - (x/L)(p_in^2 - p_out^2)),
/// phi_BA = sqrt((p_in^2 - p_out^2) / (alpha L)), uniform in x.
/// Throws UnsupportedReversal when p_in < p_out.
FieldSnapshot ba_base(const PipeModel& pipe, double p_in, double p_out, double t,
                      std::span<const double> x_grid);

/// Pressure rate dp_BA/dt(x) by the chain rule through the endpoint rates.
std::vector<double> ba_pressure_rate(const PipeModel& pipe, const Endpoints& ends,
                                     std::span<const double> x_grid);

/// Corrections of the shared pipeline; since phi_BA is uniform the residual
/// is c_s^-2 dp_BA/dt.
Corrections ba_corrections(const PipeModel& pipe, const Endpoints& ends, double t,
                           std::span<const double> x_grid, BcKind kind);

/// Endpoint pressures and rates implied by boundary data. For PPHI the outlet
/// pressure is the one whose balanced flux equals the prescribed outlet flux.
/// Missing derivative series are replaced by smoothed differentiation.
Endpoints ba_endpoints(const PipeModel& pipe, const BoundarySpec& bc, double t,
                       const numerics::SmoothingOptions& smoothing = {});

AdiabaticSolution ba_solution(const PipeModel& pipe, const BoundarySpec& bc, double t,
                              std::span<const double> x_grid,
                              const numerics::SmoothingOptions& smoothing = {});

}  // namespace gaspipe
