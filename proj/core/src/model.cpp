#include "gaspipe/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gaspipe/errors.hpp"

namespace gaspipe {

void PipeModel::validate() const {
    if (!(length > 0.0) || !(alpha > 0.0) || !(sound_speed > 0.0) || !(ref_pressure > 0.0)) {
        throw InvalidParameter("pipe parameters must be positive (L=" + std::to_string(length) +
                               ", alpha=" + std::to_string(alpha) + ", c_s=" +
                               std::to_string(sound_speed) + ", p0=" +
                               std::to_string(ref_pressure) + ")");
    }
}

double PipeModel::growth_coefficient() const {
    return sound_speed * sound_speed / std::sqrt(2.0 * alpha);
}

PipeModel PipeModel::dimensionless(double alpha_dimless) {
    PipeModel pipe{1.0, alpha_dimless, 1.0, 1.0};
    pipe.validate();
    return pipe;
}

double ScalingUnits::lambda_unit() const { return std::pow(length_unit, -1.5); }
double ScalingUnits::g_unit() const { return 1.0 / length_unit; }

ScalingUnits make_scaling(const PipeModel& pipe, double time_unit) {
    pipe.validate();
    if (!(time_unit > 0.0)) {
        throw InvalidParameter("time unit must be positive");
    }
    const double cs2 = pipe.sound_speed * pipe.sound_speed;
    ScalingUnits units;
    units.time_unit = time_unit;
    units.length_unit = pipe.length;
    units.pressure_unit = pipe.ref_pressure;
    units.flux_unit = pipe.ref_pressure * pipe.length / (cs2 * time_unit);
    units.alpha_dimless =
        pipe.alpha * pipe.length * pipe.length * pipe.length / (cs2 * cs2 * time_unit * time_unit);
    return units;
}

ParameterSchedule frozen_schedule(double lambda, double g0) {
    if (!(g0 > 0.0)) {
        throw InvalidParameter("G0 must be positive");
    }
    ParameterSchedule s;
    s.lambda = [lambda](double) { return lambda; };
    s.g0 = [g0](double) { return g0; };
    s.lambda_dot = [](double) { return 0.0; };
    s.g0_dot = [](double) { return 0.0; };
    s.lambda_cumulative = [lambda](double t) { return lambda * t; };
    s.frozen = true;
    return s;
}

ParameterSchedule modulated_schedule(double lambda0, double tau, double g0) {
    if (!(tau > 0.0)) {
        throw InvalidParameter("schedule period tau must be positive");
    }
    if (!(g0 > 0.0)) {
        throw InvalidParameter("G0 must be positive");
    }
    // (2 + cos 2wt) cos wt = 5/2 cos wt + 1/2 cos 3wt
    const double w = std::numbers::pi / tau;
    ParameterSchedule s;
    s.lambda = [=](double t) { return lambda0 * (2.0 + std::cos(2.0 * w * t)) * std::cos(w * t); };
    s.lambda_dot = [=](double t) {
        return -lambda0 * w * (2.5 * std::sin(w * t) + 1.5 * std::sin(3.0 * w * t));
    };
    s.lambda_cumulative = [=](double t) {
        return lambda0 / w * (2.5 * std::sin(w * t) + std::sin(3.0 * w * t) / 6.0);
    };
    s.g0 = [g0](double) { return g0; };
    s.g0_dot = [](double) { return 0.0; };
    return s;
}

ParameterSchedule stretch(const ParameterSchedule& schedule, double factor) {
    if (!(factor > 0.0)) {
        throw InvalidParameter("stretch factor must be positive");
    }
    ParameterSchedule s;
    s.lambda = [base = schedule.lambda, factor](double t) { return base(t / factor); };
    s.g0 = [base = schedule.g0, factor](double t) { return base(t / factor); };
    s.lambda_dot = [base = schedule.lambda_dot, factor](double t) { return base(t / factor) / factor; };
    s.g0_dot = [base = schedule.g0_dot, factor](double t) { return base(t / factor) / factor; };
    s.lambda_cumulative = [base = schedule.lambda_cumulative, factor](double t) {
        return factor * base(t / factor);
    };
    s.frozen = schedule.frozen;
    return s;
}

ParameterSchedule with_numeric_derivatives(ParameterSchedule schedule, double h) {
    if (!(h > 0.0)) {
        throw InvalidParameter("difference step must be positive");
    }
    auto central = [h](ScalarFn f) {
        return ScalarFn([f = std::move(f), h](double t) { return (f(t + h) - f(t - h)) / (2.0 * h); });
    };
    if (!schedule.lambda_dot) {
        schedule.lambda_dot = central(schedule.lambda);
    }
    if (!schedule.g0_dot) {
        schedule.g0_dot = central(schedule.g0);
    }
    return schedule;
}

std::string_view to_string(BcKind kind) {
    return kind == BcKind::PP ? "pp" : "pphi";
}

BcKind parse_bc_kind(std::string_view text) {
    if (text == "pp" || text == "PP") {
        return BcKind::PP;
    }
    if (text == "pphi" || text == "PPHI" || text == "pφ") {
        return BcKind::PPHI;
    }
    throw InvalidParameter("unknown boundary-condition kind '" + std::string(text) + "'");
}

void FieldSnapshot::validate() const {
    if (x.size() < 2 || p.size() != x.size() || phi.size() != x.size()) {
        throw InvalidParameter("snapshot arrays must have equal length >= 2");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0.0)) {
            throw StateInvalid("non-positive pressure at index " + std::to_string(i));
        }
        if (i > 0 && !(x[i] > x[i - 1])) {
            throw InvalidParameter("grid must be strictly increasing");
        }
    }
}

std::vector<double> uniform_grid(double length, std::size_t points) {
    if (points < 2 || !(length > 0.0)) {
        throw InvalidParameter("grid needs >= 2 points and a positive length");
    }
    std::vector<double> x(points);
    const double n = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        x[i] = length * static_cast<double>(i) / n;
    }
    x.back() = length;
    return x;
}

namespace {

FieldSnapshot rescale(const FieldSnapshot& in, double t_scale, double x_scale, double p_scale,
                      double phi_scale) {
    FieldSnapshot out;
    out.t = in.t * t_scale;
    out.x.reserve(in.x.size());
    out.p.reserve(in.p.size());
    out.phi.reserve(in.phi.size());
    for (double v : in.x) out.x.push_back(v * x_scale);
    for (double v : in.p) out.p.push_back(v * p_scale);
    for (double v : in.phi) out.phi.push_back(v * phi_scale);
    return out;
}

}  // namespace

FieldSnapshot to_dimensionless(const FieldSnapshot& snapshot, const ScalingUnits& units) {
    return rescale(snapshot, 1.0 / units.time_unit, 1.0 / units.length_unit,
                   1.0 / units.pressure_unit, 1.0 / units.flux_unit);
}

FieldSnapshot to_dimensional(const FieldSnapshot& snapshot, const ScalingUnits& units) {
    return rescale(snapshot, units.time_unit, units.length_unit, units.pressure_unit,
                   units.flux_unit);
}

}  // namespace gaspipe
