#include "gaspipe/adiabatic_ua.hpp"

#include <array>
#include <cmath>

#include "gaspipe/errors.hpp"
#include "gaspipe/numerics.hpp"

namespace gaspipe {
namespace {

void check_schedule(const ParameterSchedule& schedule) {
    if (!schedule.lambda || !schedule.g0 || !schedule.lambda_cumulative) {
        throw InvalidParameter("schedule is missing lambda, G0 or the cumulative lambda");
    }
}

bool needs_sensitivities(double lambda_dot, double g0_dot) {
    return lambda_dot != 0.0 || g0_dot != 0.0;
}

// Grid used for the derivative of the outlet series; the inlet and outlet
// values themselves come straight from the ODE.
constexpr std::size_t kBoundaryGridPoints = 129;

}  // namespace

AdiabaticTerms adiabatic_terms(const PipeModel& pipe, const ParameterSchedule& schedule, double t,
                               std::span<const double> x_grid, const ProfileOptions& options) {
    pipe.validate();
    check_schedule(schedule);
    AdiabaticTerms terms;
    terms.t = t;
    terms.lambda = schedule.lambda(t);
    terms.g0 = schedule.g0(t);
    terms.lambda_cumulative = schedule.lambda_cumulative(t);
    if (!schedule.frozen) {
        if (!schedule.lambda_dot || !schedule.g0_dot) {
            throw InvalidParameter("schedule derivatives are required for the adiabatic residual");
        }
        terms.lambda_dot = schedule.lambda_dot(t);
        terms.g0_dot = schedule.g0_dot(t);
    }
    if (!(terms.g0 > 0.0)) {
        throw InvalidParameter("G0(t) must stay positive (no flow reversal)");
    }

    terms.profile = g_profile_ode(terms.lambda, terms.g0, x_grid, options);
    const bool moving = needs_sensitivities(terms.lambda_dot, terms.g0_dot);
    if (moving) {
        terms.profile = g_sensitivities(std::move(terms.profile), options);
    }

    const std::size_t n = x_grid.size();
    const double growth = pipe.growth_coefficient();
    const double cs2 = pipe.sound_speed * pipe.sound_speed;

    FieldSnapshot& base = terms.base;
    base.t = t;
    base.x.assign(x_grid.begin(), x_grid.end());
    base.p.resize(n);
    base.phi.resize(n);
    const double level = growth * terms.lambda_cumulative;
    for (std::size_t i = 0; i < n; ++i) {
        base.p[i] = pipe.ref_pressure * std::exp(level + terms.profile.psi[i]);
        base.phi[i] = std::sqrt(2.0 / pipe.alpha) * base.p[i] * std::sqrt(terms.profile.g[i]);
    }

    // d/dt int_0^x G = int_0^x (dG/dlambda lambda' + dG/dG0 G0')
    std::vector<double> shift(n, 0.0);
    if (moving) {
        std::vector<double> rate(n);
        for (std::size_t i = 0; i < n; ++i) {
            rate[i] = terms.profile.dg_dlambda[i] * terms.lambda_dot +
                      terms.profile.dg_dg0[i] * terms.g0_dot;
        }
        shift = numerics::cumulative_integral(x_grid, rate);
    }

    terms.dp_dt.resize(n);
    terms.dphi_dx.resize(n);
    terms.residual.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double g = terms.profile.g[i];
        const double root = std::sqrt(g);
        terms.dp_dt[i] = base.p[i] * (growth * terms.lambda - shift[i]);
        // d/dx [p sqrt(G)] with p' = -G p and G' from the profile equation.
        terms.dphi_dx[i] = std::sqrt(2.0 / pipe.alpha) * base.p[i] *
                           (-g * root + g_slope(g, terms.lambda) / (2.0 * root));
        terms.residual[i] = terms.dphi_dx[i] + terms.dp_dt[i] / cs2;
    }
    return terms;
}

FieldSnapshot ua_base(const PipeModel& pipe, const ParameterSchedule& schedule, double t,
                      std::span<const double> x_grid) {
    check_schedule(schedule);
    ParameterSchedule frozen = schedule;
    frozen.frozen = true;
    return adiabatic_terms(pipe, frozen, t, x_grid).base;
}

std::vector<double> adiabatic_residual(const PipeModel& pipe, const ParameterSchedule& schedule,
                                       double t, std::span<const double> x_grid) {
    return adiabatic_terms(pipe, schedule, t, x_grid).residual;
}

std::vector<double> delta_phi_pp(const PipeModel& pipe, const ParameterSchedule& schedule, double t,
                                 std::span<const double> x_grid) {
    const auto terms = adiabatic_terms(pipe, schedule, t, x_grid);
    return correction_flux_pp(x_grid, terms.base.phi, terms.residual);
}

std::vector<double> delta_phi_pphi(const PipeModel& pipe, const ParameterSchedule& schedule,
                                   double t, std::span<const double> x_grid) {
    const auto terms = adiabatic_terms(pipe, schedule, t, x_grid);
    return correction_flux_pphi(x_grid, terms.residual);
}

std::vector<double> delta_p(const PipeModel& pipe, const ParameterSchedule& schedule, double t,
                            std::span<const double> x_grid, std::span<const double> delta_phi) {
    const auto base = ua_base(pipe, schedule, t, x_grid);
    return correction_pressure(pipe, x_grid, base.p, base.phi, delta_phi);
}

AdiabaticSolution ua_solution(const PipeModel& pipe, const AdiabaticTerms& terms, BcKind kind) {
    AdiabaticSolution out;
    out.base = terms.base;
    out.corrections = perturbative_corrections(pipe, terms.base.x, terms.base.p, terms.base.phi,
                                               terms.residual, kind);
    out.corrected = apply_corrections(out.base, out.corrections);
    return out;
}

AdiabaticSolution ua_solution(const PipeModel& pipe, const ParameterSchedule& schedule, double t,
                              std::span<const double> x_grid, BcKind kind) {
    return ua_solution(pipe, adiabatic_terms(pipe, schedule, t, x_grid), kind);
}

BoundarySpec ua_boundary(const PipeModel& pipe, const ParameterSchedule& schedule, BcKind kind) {
    pipe.validate();
    check_schedule(schedule);
    const double growth = pipe.growth_coefficient();
    const double p0 = pipe.ref_pressure;

    BoundarySpec bc;
    bc.kind = kind;
    bc.left = [=](double t) { return p0 * std::exp(growth * schedule.lambda_cumulative(t)); };
    bc.left_dot = [=](double t) {
        return p0 * std::exp(growth * schedule.lambda_cumulative(t)) * growth * schedule.lambda(t);
    };

    const std::array<double, 2> ends{0.0, pipe.length};
    auto outlet = [=](double t) {
        const auto profile = g_profile_ode(schedule.lambda(t), schedule.g0(t), ends);
        const double p = p0 * std::exp(growth * schedule.lambda_cumulative(t) + profile.psi.back());
        return std::pair{p, profile.g.back()};
    };
    const auto fine = uniform_grid(pipe.length, kBoundaryGridPoints);
    auto outlet_rates = [=](double t) {
        const auto terms = adiabatic_terms(pipe, schedule, t, fine);
        const double g_dot = terms.profile.has_sensitivities()
                                 ? terms.profile.dg_dlambda.back() * terms.lambda_dot +
                                       terms.profile.dg_dg0.back() * terms.g0_dot
                                 : 0.0;
        return std::array{terms.base.p.back(), terms.profile.g.back(), terms.dp_dt.back(), g_dot};
    };

    if (kind == BcKind::PP) {
        bc.right = [=](double t) { return outlet(t).first; };
        bc.right_dot = [=](double t) { return outlet_rates(t)[2]; };
    } else {
        const double coeff = std::sqrt(2.0 / pipe.alpha);
        bc.right = [=](double t) {
            const auto [p, g] = outlet(t);
            return coeff * p * std::sqrt(g);
        };
        bc.right_dot = [=](double t) {
            const auto [p, g, p_dot, g_dot] = outlet_rates(t);
            const double root = std::sqrt(g);
            return coeff * (p_dot * root + p * g_dot / (2.0 * root));
        };
    }
    return bc;
}

}  // namespace gaspipe
