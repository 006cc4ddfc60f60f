#pragma once

#include <span>
#include <vector>

#include "gaspipe/model.hpp"

namespace gaspipe {

/// Spatial profile G(x; lambda, G0) = -d psi / dx of the exact unbalanced
/// solution, with psi(x) = -int_0^x G and the parameter sensitivities.
struct GProfile {
    double lambda = 0.0;
    double g0 = 0.0;
    std::vector<double> x;
    std::vector<double> g;
    std::vector<double> psi;
    // Empty until g_sensitivities() is applied.
    std::vector<double> dg_dlambda;
    std::vector<double> dg_dg0;

    bool has_sensitivities() const { return dg_dlambda.size() == x.size(); }
};

struct ProfileOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    // G below this is treated as a flow reversal.
    double g_floor = 1e-14;
    // G above this is treated as a blow-up.
    double g_ceiling = 1e10;
};

/// Right-hand side of the profile equation, G' = 2 G^2 - lambda sqrt(G).
double g_slope(double g, double lambda);

/// G value with zero slope, (lambda / 2)^(2/3); only meaningful for lambda > 0.
double g_fixed_point(double lambda);

/// Closed-form antiderivative f(z, lambda) of 1 / (lambda sqrt(z) - 2 z^2),
/// so that f(G0, lambda) - f(G(x), lambda) = x along a profile. Uses
/// log|(lambda/2)^(1/3) - sqrt(z)|, valid on either side of the fixed point.
/// Throws UnsupportedBranch for lambda <= 0 and DomainError for z <= 0 or z at
/// the fixed point.
double f_antiderivative(double z, double lambda);

/// Integrates G and psi from G(0) = g0 across `x_grid` (x_grid[0] must be 0).
/// Throws ProfileDegenerate when G collapses to zero and ProfileSingular when
/// G diverges before the end of the grid.
GProfile g_profile_ode(double lambda, double g0, std::span<const double> x_grid,
                       const ProfileOptions& options = {});

/// Fills dG/dlambda and dG/dG0 by implicit differentiation of the profile
/// relation; integrates the variational equations instead when G0 sits
/// on the zero-slope point, where that formula is ill-conditioned.
GProfile g_sensitivities(GProfile profile, const ProfileOptions& options = {});

/// p(t,x) = p0 exp(lambda c_s^2 t / sqrt(2 alpha) + psi(x)),
/// phi(t,x) = p(t,x) sqrt(2 G(x) / alpha).
FieldSnapshot exact_fields(const PipeModel& pipe, double lambda, double g0, double t,
                           std::span<const double> x_grid, const ProfileOptions& options = {});

/// Same, reusing a computed profile.
FieldSnapshot exact_fields(const PipeModel& pipe, const GProfile& profile, double t);

}  // namespace gaspipe
