#include "gaspipe/adiabatic_ba.hpp"

#include <cmath>
#include <sstream>

#include "gaspipe/errors.hpp"

namespace gaspipe {

FieldSnapshot ba_base(const PipeModel& pipe, double p_in, double p_out, double t,
                      std::span<const double> x_grid) {
    pipe.validate();
    if (!(p_out > 0.0) || !(p_in > 0.0)) {
        throw InvalidParameter("endpoint pressures must be positive");
    }
    if (p_in < p_out) {
        std::ostringstream msg;
        msg << "balanced baseline needs p_in >= p_out (p_in=" << p_in << ", p_out=" << p_out << ")";
        throw UnsupportedReversal(msg.str());
    }
    const double drop = p_in * p_in - p_out * p_out;
    FieldSnapshot snap;
    snap.t = t;
    snap.x.assign(x_grid.begin(), x_grid.end());
    snap.p.resize(x_grid.size());
    snap.phi.assign(x_grid.size(), std::sqrt(drop / (pipe.alpha * pipe.length)));
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        snap.p[i] = std::sqrt(p_in * p_in - x_grid[i] / pipe.length * drop);
    }
    snap.p.front() = p_in;
    snap.p.back() = x_grid.back() == pipe.length ? p_out : snap.p.back();
    return snap;
}

std::vector<double> ba_pressure_rate(const PipeModel& pipe, const Endpoints& ends,
                                     std::span<const double> x_grid) {
    const auto base = ba_base(pipe, ends.p_in, ends.p_out, 0.0, x_grid);
    std::vector<double> rate(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const double s = x_grid[i] / pipe.length;
        rate[i] = (ends.p_in * ends.p_in_dot * (1.0 - s) + ends.p_out * ends.p_out_dot * s) / base.p[i];
    }
    return rate;
}

Corrections ba_corrections(const PipeModel& pipe, const Endpoints& ends, double t,
                           std::span<const double> x_grid, BcKind kind) {
    const auto base = ba_base(pipe, ends.p_in, ends.p_out, t, x_grid);
    auto residual = ba_pressure_rate(pipe, ends, x_grid);
    const double cs2 = pipe.sound_speed * pipe.sound_speed;
    for (double& r : residual) {
        r /= cs2;
    }
    return perturbative_corrections(pipe, x_grid, base.p, base.phi, residual, kind);
}

Endpoints ba_endpoints(const PipeModel& pipe, const BoundarySpec& bc, double t,
                       const numerics::SmoothingOptions& smoothing) {
    if (!bc.left || !bc.right) {
        throw InvalidParameter("boundary spec needs both series");
    }
    auto rate = [&](const ScalarFn& series, const ScalarFn& derivative) {
        return derivative ? derivative(t) : numerics::smoothed_derivative(series, t, smoothing);
    };
    Endpoints ends;
    ends.p_in = bc.left(t);
    ends.p_in_dot = rate(bc.left, bc.left_dot);
    if (bc.kind == BcKind::PP) {
        ends.p_out = bc.right(t);
        ends.p_out_dot = rate(bc.right, bc.right_dot);
        return ends;
    }
    const double flux = bc.right(t);
    const double flux_dot = rate(bc.right, bc.right_dot);
    const double square = ends.p_in * ends.p_in - pipe.alpha * pipe.length * flux * flux;
    if (!(square > 0.0)) {
        std::ostringstream msg;
        msg << "outlet flux " << flux << " exceeds what inlet pressure " << ends.p_in
            << " can drive through a balanced pipe";
        throw DomainError(msg.str());
    }
    ends.p_out = std::sqrt(square);
    ends.p_out_dot = (ends.p_in * ends.p_in_dot - pipe.alpha * pipe.length * flux * flux_dot) / ends.p_out;
    return ends;
}

AdiabaticSolution ba_solution(const PipeModel& pipe, const BoundarySpec& bc, double t,
                              std::span<const double> x_grid,
                              const numerics::SmoothingOptions& smoothing) {
    const auto ends = ba_endpoints(pipe, bc, t, smoothing);
    AdiabaticSolution out;
    out.base = ba_base(pipe, ends.p_in, ends.p_out, t, x_grid);
    out.corrections = ba_corrections(pipe, ends, t, x_grid, bc.kind);
    out.corrected = apply_corrections(out.base, out.corrections);
    return out;
}

}  // namespace gaspipe
