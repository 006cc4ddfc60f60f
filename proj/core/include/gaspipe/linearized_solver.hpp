#pragma once

#include <span>
#include <vector>

#include "gaspipe/adiabatic_ua.hpp"
#include "gaspipe/model.hpp"

namespace gaspipe {

struct LinearizedOptions {
    // Drop the c_s^-2 d(delta p)/dt term: each output is then a steady solve.
    bool drop_time_derivative = false;
    // Multiplies the residual forcing.
    double forcing_scale = 1.0;
    ProfileOptions profile{};
};

struct CorrectionSnapshot {
    double t = 0.0;
    std::vector<double> delta_p;
    std::vector<double> delta_phi;
};

/// Integrates the system linearized around the adiabatic base,
///   delta_phi = -d/dx(delta_p p_UA) / (alpha phi_UA),
///   c_s^-2 d(delta_p)/dt = -d(delta_phi)/dx - r(x, t),
/// from delta_p(0, x) = 0 with the trapezoidal rule. delta_p vanishes at
/// x = 0 (and x = L for PP); for PPHI delta_phi vanishes at x = L.
/// Throws DegenerateLinearization when phi_UA is not positive.
std::vector<CorrectionSnapshot> linearized_solve(const PipeModel& pipe,
                                                 const ParameterSchedule& schedule, BcKind kind,
                                                 std::span<const double> x_grid, double dt,
                                                 double t_end,
                                                 std::span<const double> output_times,
                                                 const LinearizedOptions& options = {});

/// Steady version at one instant (time-derivative term removed).
CorrectionSnapshot linearized_steady(const PipeModel& pipe, const AdiabaticTerms& terms,
                                     BcKind kind, double forcing_scale = 1.0);

}  // namespace gaspipe
