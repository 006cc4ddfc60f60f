#include "gaspipe/validation.hpp"

#include <algorithm>
#include <cmath>

#include "gaspipe/adiabatic_ua.hpp"
#include "gaspipe/calibration.hpp"
#include "gaspipe/numerics.hpp"
#include "gaspipe/reference_solver.hpp"
#include "gaspipe/scenario.hpp"

namespace gaspipe {
namespace {

CheckResult at_most(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, value <= threshold};
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

std::vector<CheckResult> validate_scenario(const ScenarioConfig& config) {
    const auto s = scale(config);
    const auto x = uniform_grid(1.0, config.nx);
    const auto times = output_grid(s.output_dt, s.t_end);
    std::vector<CheckResult> out;

    double orthogonality = 0.0, pp_ends = 0.0, pphi_ends = 0.0;
    for (double t : times) {
        const auto terms = adiabatic_terms(s.pipe, s.schedule, t, x, config.profile);
        const auto pp = ua_solution(s.pipe, terms, BcKind::PP);
        std::vector<double> weighted(x.size()), magnitude(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            weighted[i] = terms.base.phi[i] * pp.corrections.delta_phi[i];
            magnitude[i] = std::abs(weighted[i]);
        }
        const double scale_ortho = numerics::integral(x, magnitude);
        if (scale_ortho > 0.0) {
            orthogonality = std::max(orthogonality, std::abs(numerics::integral(x, weighted)) / scale_ortho);
        }
        const double dp_scale = std::max(max_abs(pp.corrections.delta_p), 1e-300);
        pp_ends = std::max({pp_ends, std::abs(pp.corrections.delta_p.front()) / dp_scale,
                            std::abs(pp.corrections.delta_p.back()) / dp_scale});
        const auto pphi = ua_solution(s.pipe, terms, BcKind::PPHI);
        pphi_ends = std::max({pphi_ends, std::abs(pphi.corrections.delta_p.front()),
                              std::abs(pphi.corrections.delta_phi.back())});
    }
    out.push_back(at_most("pp_orthogonality", orthogonality, 1e-8));
    out.push_back(at_most("pp_boundary_exactness", pp_ends, 1e-8));
    out.push_back(at_most("pphi_boundary_exactness", pphi_ends, 0.0));

    {
        const double t = times[times.size() / 2];
        const auto frozen = frozen_schedule(s.schedule.lambda(t), s.schedule.g0(t));
        double worst = 0.0;
        for (BcKind kind : {BcKind::PP, BcKind::PPHI}) {
            const auto sol = ua_solution(s.pipe, frozen, t, x, kind);
            worst = std::max({worst, max_abs(sol.corrections.delta_p), max_abs(sol.corrections.delta_phi)});
        }
        out.push_back(at_most("frozen_degeneracy", worst, 1e-12));
    }

    for (BcKind kind : config.bc_kinds) {
        const auto bc = ua_boundary(s.pipe, s.schedule, kind);
        const auto recovered = calibrate(s.pipe, bc, times);
        double lambda_scale = 0.0, lambda_err = 0.0, g0_err = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            lambda_scale = std::max(lambda_scale, std::abs(s.schedule.lambda(times[i])));
        }
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double lambda = s.schedule.lambda(times[i]);
            const double g0 = s.schedule.g0(times[i]);
            lambda_err = std::max(lambda_err, std::abs(recovered.lambda[i] - lambda) / std::max(lambda_scale, 1e-300));
            g0_err = std::max(g0_err, std::abs(recovered.g0[i] - g0) / g0);
        }
        const auto tag = std::string(to_string(kind));
        out.push_back(at_most("calibration_lambda_" + tag, lambda_err, 1e-6));
        out.push_back(at_most("calibration_g0_" + tag, g0_err, 1e-6));
    }

    for (BcKind kind : config.bc_kinds) {
        const auto bc = ua_boundary(s.pipe, s.schedule, kind);
        const auto initial = ua_base(s.pipe, s.schedule, 0.0, x);
        double defect = 0.0;
        auto observer = [&defect](const ReferenceSolver& solver, const PdeState& before, const PdeState& after) {
            const double change = solver.line_pack(after) - solver.line_pack(before);
            defect = std::max(defect, std::abs(change - (after.inflow - after.outflow)) /
                                          std::abs(solver.line_pack(after)));
        };
        const std::vector<double> end{s.t_end};
        solve_scenario(s.pipe, bc, initial, s.t_end, s.dt, end, config.reference, observer);
        out.push_back(at_most("line_pack_balance_" + std::string(to_string(kind)), defect, 1e-12));
    }

    {
        const double g0 = s.schedule.g0(0.0);
        const auto stationary = frozen_schedule(0.0, g0);
        const auto bc = ua_boundary(s.pipe, stationary, BcKind::PP);
        const auto initial = ua_base(s.pipe, stationary, 0.0, x);
        ReferenceSolver solver(s.pipe, x, bc, config.reference);
        auto state = solver.initial_state(initial);
        for (int k = 0; k < 10000; ++k) state = solver.advance(state, s.dt);
        double drift = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            drift = std::max(drift, std::abs(state.p[i] - initial.p[i]) / initial.p[i]);
        }
        out.push_back(at_most("stationary_drift", drift, 1e-9));
    }
    return out;
}

}  // namespace gaspipe
