#pragma once

#include <span>
#include <vector>

#include "gaspipe/corrections.hpp"
#include "gaspipe/model.hpp"
#include "gaspipe/profile.hpp"

namespace gaspipe {

/// Everything the unbalanced-adiabatic construction needs at one instant.
struct AdiabaticTerms {
    double t = 0.0;
    double lambda = 0.0;
    double g0 = 0.0;
    double lambda_dot = 0.0;
    double g0_dot = 0.0;
    double lambda_cumulative = 0.0;
    GProfile profile;
    FieldSnapshot base;
    std::vector<double> dp_dt;
    std::vector<double> dphi_dx;
    // Mass-balance defect r = dphi/dx + c_s^-2 dp/dt of the base fields.
    std::vector<double> residual;
};

AdiabaticTerms adiabatic_terms(const PipeModel& pipe, const ParameterSchedule& schedule, double t,
                               std::span<const double> x_grid, const ProfileOptions& options = {});

/// p_UA(x) = p0 exp(c_s^2 Lambda(t) / sqrt(2 alpha) - int_0^x G),
/// phi_UA = sqrt(2/alpha) p_UA sqrt(G).
FieldSnapshot ua_base(const PipeModel& pipe, const ParameterSchedule& schedule, double t,
                      std::span<const double> x_grid);

std::vector<double> adiabatic_residual(const PipeModel& pipe, const ParameterSchedule& schedule,
                                       double t, std::span<const double> x_grid);

std::vector<double> delta_phi_pp(const PipeModel& pipe, const ParameterSchedule& schedule, double t,
                                 std::span<const double> x_grid);

std::vector<double> delta_phi_pphi(const PipeModel& pipe, const ParameterSchedule& schedule,
                                   double t, std::span<const double> x_grid);

std::vector<double> delta_p(const PipeModel& pipe, const ParameterSchedule& schedule, double t,
                            std::span<const double> x_grid, std::span<const double> delta_phi);

struct AdiabaticSolution {
    FieldSnapshot base;
    FieldSnapshot corrected;
    Corrections corrections;
};

AdiabaticSolution ua_solution(const PipeModel& pipe, const AdiabaticTerms& terms, BcKind kind);

AdiabaticSolution ua_solution(const PipeModel& pipe, const ParameterSchedule& schedule, double t,
                              std::span<const double> x_grid, BcKind kind);

/// Boundary series generated by the base solution at x=0 and x=L: inlet
/// pressure, and outlet pressure (PP) or outlet flux (PPHI), with their
/// analytic time derivatives.
BoundarySpec ua_boundary(const PipeModel& pipe, const ParameterSchedule& schedule, BcKind kind);

}  // namespace gaspipe
