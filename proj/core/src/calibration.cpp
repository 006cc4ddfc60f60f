#include "gaspipe/calibration.hpp"

#include <algorithm>
#include <array>
#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "gaspipe/errors.hpp"
#include "gaspipe/numerics.hpp"

namespace gaspipe {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Residual of the outlet condition as a function of G0, increasing in G0.
// Profile collapse maps to -inf and blow-up to +inf so both can be bracketed.
class OutletResidual {
public:
    OutletResidual(const PipeModel& pipe, BcKind kind, double lambda, double p_left, double right,
                   const ProfileOptions& options)
        : pipe_(pipe), kind_(kind), lambda_(lambda), options_(options) {
        if (kind == BcKind::PP) {
            target_ = std::log(p_left / right);
        } else {
            target_ = std::log(right) - std::log(p_left);
        }
    }

    double operator()(double g0) const {
        const std::array<double, 2> ends{0.0, pipe_.length};
        try {
            const auto profile = g_profile_ode(lambda_, g0, ends, options_);
            if (kind_ == BcKind::PP) {
                return -profile.psi.back() - target_;
            }
            return profile.psi.back() + 0.5 * std::log(2.0 * profile.g.back() / pipe_.alpha) - target_;
        } catch (const ProfileSingular&) {
            return kInf;
        } catch (const ProfileDegenerate&) {
            return -kInf;
        }
    }

private:
    const PipeModel& pipe_;
    BcKind kind_;
    double lambda_;
    double target_ = 0.0;
    const ProfileOptions& options_;
};

double stationary_guess(const PipeModel& pipe, BcKind kind, double p_left, double right) {
    if (kind == BcKind::PP) {
        const double ratio = right / p_left;
        return std::max((1.0 - ratio * ratio) / (2.0 * pipe.length), 1e-12 / pipe.length);
    }
    return std::max(pipe.alpha * right * right / (2.0 * p_left * p_left), 1e-12 / pipe.length);
}

double solve_g0(const OutletResidual& residual, double guess, const CalibrationOptions& options,
                double t) {
    double lo = guess / options.bracket_factor;
    double hi = guess * options.bracket_factor;
    double f_lo = residual(lo);
    double f_hi = residual(hi);
    double step = options.bracket_factor;
    auto fail = [&](const char* reason) {
        std::ostringstream msg;
        msg << "G0 calibration at t=" << t << ": " << reason << " (searched [" << lo << ", " << hi
            << "], residuals " << f_lo << ", " << f_hi << ")";
        throw CalibrationError(msg.str());
    };

    for (int k = 0; k < options.max_expansions && !(f_lo <= 0.0 && f_hi >= 0.0); ++k) {
        step *= 1.5;
        if (f_lo > 0.0) {
            hi = lo;
            f_hi = f_lo;
            lo /= step;
            f_lo = residual(lo);
        } else if (f_hi < 0.0) {
            lo = hi;
            f_lo = f_hi;
            hi *= step;
            f_hi = residual(hi);
        }
    }
    if (!(f_lo <= 0.0 && f_hi >= 0.0)) {
        fail("no sign change found");
    }
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;

    // Pull infinite ends inward by bisection until both residuals are finite.
    for (int k = 0; k < 200 && (std::isinf(f_lo) || std::isinf(f_hi)); ++k) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = residual(mid);
        if (f_mid == 0.0) return mid;
        if (f_mid < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    if (std::isinf(f_lo) || std::isinf(f_hi)) {
        fail("bracket ends stay outside the admissible profile region");
    }

    // Residual must increase across the bracket for the root to be unique.
    double previous = f_lo;
    for (int k = 1; k <= 3; ++k) {
        const double value = residual(lo + 0.25 * k * (hi - lo));
        if (!(value >= previous)) {
            fail("residual is not monotone in G0; root is ambiguous");
        }
        previous = value;
    }
    if (!(f_hi >= previous)) {
        fail("residual is not monotone in G0; root is ambiguous");
    }

    boost::uintmax_t iterations = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        [&](double g) { return residual(g); }, lo, hi, f_lo, f_hi,
        boost::math::tools::eps_tolerance<double>(50), iterations);
    return 0.5 * (bracket.first + bracket.second);
}

ScalarFn hermite(std::vector<double> t, std::vector<double> y, std::vector<double> dy) {
    const double t0 = t.front();
    const double t1 = t.back();
    boost::math::interpolators::cubic_hermite<std::vector<double>> spline(std::move(t), std::move(y),
                                                                          std::move(dy));
    return [spline, t0, t1](double at) { return spline(std::clamp(at, t0, t1)); };
}

ScalarFn piecewise_linear(std::vector<double> t, std::vector<double> y) {
    return [t = std::move(t), y = std::move(y)](double at) {
        return numerics::interpolate_linear(t, y, at);
    };
}

}  // namespace

CalibrationResult calibrate(const PipeModel& pipe, const BoundarySpec& bc,
                            std::span<const double> time_grid, const CalibrationOptions& options) {
    pipe.validate();
    if (!bc.left || !bc.right) {
        throw InvalidParameter("calibration needs both boundary series");
    }
    const std::size_t n = time_grid.size();
    if (n < options.degree + 1) {
        throw InvalidParameter("time grid is too short for the derivative fit");
    }
    for (std::size_t k = 1; k < n; ++k) {
        if (!(time_grid[k] > time_grid[k - 1])) {
            throw InvalidParameter("calibration time grid must be strictly increasing");
        }
    }

    CalibrationResult out;
    out.t.assign(time_grid.begin(), time_grid.end());
    std::vector<double> left(n);
    std::vector<double> right(n);
    std::vector<double> log_left(n);
    for (std::size_t k = 0; k < n; ++k) {
        left[k] = bc.left(time_grid[k]);
        right[k] = bc.right(time_grid[k]);
        if (!(left[k] > 0.0) || !(right[k] > 0.0)) {
            std::ostringstream msg;
            msg << "boundary series must stay positive (t=" << time_grid[k] << ")";
            throw CalibrationError(msg.str());
        }
        log_left[k] = std::log(left[k] / pipe.ref_pressure);
    }

    const double inverse_growth = 1.0 / pipe.growth_coefficient();
    out.lambda_cumulative.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.lambda_cumulative[k] = inverse_growth * log_left[k];
    }
    if (time_grid.front() == 0.0 && std::abs(log_left.front()) > 1e-9) {
        throw CalibrationError("inlet pressure at t=0 must equal the reference pressure");
    }
    out.lambda = numerics::local_poly_derivatives(time_grid, out.lambda_cumulative,
                                                  options.half_window, options.degree);
    out.lambda_dot =
        numerics::local_poly_derivatives(time_grid, out.lambda, options.half_window, options.degree);

    out.g0.resize(n);
    double guess = stationary_guess(pipe, bc.kind, left.front(), right.front());
    for (std::size_t k = 0; k < n; ++k) {
        const OutletResidual residual(pipe, bc.kind, out.lambda[k], left[k], right[k], options.profile);
        out.g0[k] = solve_g0(residual, guess, options, time_grid[k]);
        guess = out.g0[k];
    }
    out.g0_dot =
        numerics::local_poly_derivatives(time_grid, out.g0, options.half_window, options.degree);

    ParameterSchedule& s = out.schedule;
    s.lambda = hermite(out.t, out.lambda, out.lambda_dot);
    s.lambda_cumulative = hermite(out.t, out.lambda_cumulative, out.lambda);
    s.g0 = hermite(out.t, out.g0, out.g0_dot);
    s.lambda_dot = piecewise_linear(out.t, out.lambda_dot);
    s.g0_dot = piecewise_linear(out.t, out.g0_dot);
    return out;
}

}  // namespace gaspipe
