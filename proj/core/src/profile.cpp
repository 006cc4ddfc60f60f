#include "gaspipe/profile.hpp"

#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "gaspipe/errors.hpp"

namespace gaspipe {
namespace {

namespace odeint = boost::numeric::odeint;

struct ProfileGuard {
    const ProfileOptions& options;
    double lambda;
    double g0;

    void check(double g, double x) const {
        if (!std::isfinite(g) || g > options.g_ceiling) {
            std::ostringstream msg;
            msg << "G profile diverges at x=" << x << " (lambda=" << lambda << ", G0=" << g0 << ")";
            throw ProfileSingular(msg.str());
        }
        if (g <= options.g_floor) {
            std::ostringstream msg;
            msg << "G profile reaches zero at x=" << x << " (lambda=" << lambda << ", G0=" << g0
                << "): flow reversal inside the pipe";
            throw ProfileDegenerate(msg.str());
        }
    }
};

void check_grid(std::span<const double> x_grid) {
    if (x_grid.size() < 2 || x_grid.front() != 0.0) {
        throw InvalidParameter("profile grid must start at x=0 and have >= 2 nodes");
    }
    for (std::size_t i = 1; i < x_grid.size(); ++i) {
        if (!(x_grid[i] > x_grid[i - 1])) {
            throw InvalidParameter("profile grid must be strictly increasing");
        }
    }
}

// Integrates the state through the grid, recording at every node.
template <class State, class Rhs, class Record>
void integrate_on_grid(Rhs rhs, State state, std::span<const double> x_grid,
                       const ProfileOptions& options, const ProfileGuard& guard, Record record) {
    auto stepper = odeint::make_dense_output(options.abs_tol, options.rel_tol,
                                             odeint::runge_kutta_dopri5<State>());
    const double h0 = std::min(1e-3, x_grid[1] - x_grid[0]) * 1e-2;
    try {
        odeint::integrate_times(
            stepper, rhs, state, x_grid.begin(), x_grid.end(), h0,
            [&](const State& s, double x) {
                guard.check(s[0], x);
                record(s);
            });
    } catch (const odeint::step_adjustment_error& e) {
        throw ProfileSingular(std::string("profile step size collapsed: ") + e.what());
    } catch (const odeint::no_progress_error& e) {
        throw ProfileSingular(std::string("profile integration stalled: ") + e.what());
    }
}

// Variational equations for (G, S_lambda, S_G0).
void sensitivities_by_variation(GProfile& profile, const ProfileOptions& options) {
    using State = std::array<double, 3>;
    const double lambda = profile.lambda;
    const ProfileGuard guard{options, lambda, profile.g0};
    auto rhs = [lambda, &options](const State& s, State& ds, double) {
        const double g = std::max(s[0], options.g_floor);
        const double root = std::sqrt(g);
        const double jac = 4.0 * g - 0.5 * lambda / root;
        ds[0] = 2.0 * g * g - lambda * root;
        ds[1] = jac * s[1] - root;
        ds[2] = jac * s[2];
    };
    profile.dg_dlambda.clear();
    profile.dg_dg0.clear();
    integrate_on_grid(rhs, State{profile.g0, 0.0, 1.0}, profile.x, options, guard,
                      [&](const State& s) {
                          profile.dg_dlambda.push_back(s[1]);
                          profile.dg_dg0.push_back(s[2]);
                      });
}

}  // namespace

double g_slope(double g, double lambda) {
    return 2.0 * g * g - lambda * std::sqrt(g);
}

double g_fixed_point(double lambda) {
    return std::cbrt(0.25 * lambda * lambda);
}

double f_antiderivative(double z, double lambda) {
    if (!(lambda > 0.0)) {
        throw UnsupportedBranch("closed-form antiderivative needs lambda > 0; integrate the ODE instead");
    }
    if (!(z > 0.0)) {
        throw DomainError("closed-form antiderivative needs z > 0");
    }
    const double a = std::cbrt(0.5 * lambda);  // (lambda/2)^(1/3)
    const double root = std::sqrt(z);
    const double gap = a - root;
    if (std::abs(gap) <= 1e-15 * a) {
        throw DomainError("closed-form antiderivative is singular at the fixed point z=(lambda/2)^(2/3)");
    }
    // The leading factor 2^(2/3) / (3 lambda^(2/3)) equals 1 / (3 a^2).
    const double sqrt3 = std::sqrt(3.0);
    return (-std::log(std::abs(gap)) + 0.5 * std::log(a * a + a * root + z) +
            sqrt3 * std::atan((1.0 + 2.0 * root / a) / sqrt3)) /
           (3.0 * a * a);
}

GProfile g_profile_ode(double lambda, double g0, std::span<const double> x_grid,
                       const ProfileOptions& options) {
    if (!(g0 > 0.0) || !std::isfinite(lambda)) {
        throw InvalidParameter("profile needs G0 > 0 and finite lambda");
    }
    check_grid(x_grid);

    using State = std::array<double, 2>;  // (G, psi)
    GProfile profile;
    profile.lambda = lambda;
    profile.g0 = g0;
    profile.x.assign(x_grid.begin(), x_grid.end());
    profile.g.reserve(x_grid.size());
    profile.psi.reserve(x_grid.size());

    const ProfileGuard guard{options, lambda, g0};
    auto rhs = [lambda, &options](const State& s, State& ds, double) {
        const double g = std::max(s[0], options.g_floor);
        ds[0] = 2.0 * g * g - lambda * std::sqrt(g);
        ds[1] = -s[0];
    };
    integrate_on_grid(rhs, State{g0, 0.0}, x_grid, options, guard, [&](const State& s) {
        profile.g.push_back(s[0]);
        profile.psi.push_back(s[1]);
    });
    profile.g.front() = g0;
    profile.psi.front() = 0.0;
    return profile;
}

GProfile g_sensitivities(GProfile profile, const ProfileOptions& options) {
    const std::size_t n = profile.x.size();
    if (n < 2 || profile.g.size() != n) {
        throw InvalidParameter("sensitivities need a computed profile");
    }
    const double lambda = profile.lambda;
    const double g0 = profile.g0;
    auto slope_of = [lambda](double z) { return lambda * std::sqrt(z) - 2.0 * z * z; };
    const double h0 = slope_of(g0);
    const double scale = lambda * lambda == 0.0 ? 2.0 * g0 * g0
                                                : std::max(std::abs(lambda) * std::sqrt(g0), 2.0 * g0 * g0);
    if (std::abs(h0) < 1e-6 * scale) {
        sensitivities_by_variation(profile, options);
        profile.dg_dlambda.front() = 0.0;
        profile.dg_dg0.front() = 1.0;
        return profile;
    }

    using boost::math::quadrature::gauss;
    profile.dg_dlambda.assign(n, 0.0);
    profile.dg_dg0.assign(n, 1.0);
    auto weight = [&](double z) {
        const double h = slope_of(z);
        return std::sqrt(z) / (h * h);
    };
    // int_{G(x_i)}^{G0} accumulated segment by segment along the profile.
    // A segment is accepted when two Gauss-Legendre orders agree, else bisected.
    std::function<double(double, double, int)> segment = [&](double a, double b, int depth) {
        const double fine = gauss<double, 10>::integrate(weight, a, b);
        const double coarse = gauss<double, 7>::integrate(weight, a, b);
        if (std::isfinite(fine) && std::abs(fine - coarse) <= 1e-12 * std::abs(fine) + 1e-300) return fine;
        if (depth >= 30 || !std::isfinite(fine)) return std::numeric_limits<double>::quiet_NaN();
        const double mid = 0.5 * (a + b);
        return segment(a, mid, depth + 1) + segment(mid, b, depth + 1);
    };
    double running = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double a = profile.g[i];
        const double b = profile.g[i - 1];
        running += segment(a, b, 0);
        if (!std::isfinite(running)) {
            std::ostringstream msg;
            msg << "sensitivity quadrature did not converge at x=" << profile.x[i]
                << " (G=" << a << ", G0=" << g0 << ", lambda=" << lambda << ")";
            throw NumericalError(msg.str());
        }
        const double h = slope_of(a);
        profile.dg_dg0[i] = h / h0;
        profile.dg_dlambda[i] = -h * running;
    }
    return profile;
}

FieldSnapshot exact_fields(const PipeModel& pipe, const GProfile& profile, double t) {
    pipe.validate();
    FieldSnapshot snap;
    snap.t = t;
    snap.x = profile.x;
    snap.p.resize(profile.x.size());
    snap.phi.resize(profile.x.size());
    const double growth = profile.lambda * pipe.growth_coefficient() * t;
    for (std::size_t i = 0; i < profile.x.size(); ++i) {
        snap.p[i] = pipe.ref_pressure * std::exp(growth + profile.psi[i]);
        snap.phi[i] = snap.p[i] * std::sqrt(2.0 * profile.g[i] / pipe.alpha);
    }
    return snap;
}

FieldSnapshot exact_fields(const PipeModel& pipe, double lambda, double g0, double t,
                           std::span<const double> x_grid, const ProfileOptions& options) {
    return exact_fields(pipe, g_profile_ode(lambda, g0, x_grid, options), t);
}

}  // namespace gaspipe
