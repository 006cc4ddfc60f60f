#include "gaspipe/linearized_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gaspipe/errors.hpp"
#include "gaspipe/numerics.hpp"

namespace gaspipe {
namespace {

// d(delta_p)/dt = A delta_p + b restricted to the unknown nodes.
struct LinearOperator {
    std::vector<double> lower, diag, upper, forcing;
};

class Discretization {
public:
    Discretization(const PipeModel& pipe, std::span<const double> x, BcKind kind)
        : pipe_(pipe), kind_(kind), n_(x.size()) {
        if (n_ < 4) {
            throw InvalidParameter("linearized solver needs at least 4 nodes");
        }
        h_ = (x.back() - x.front()) / static_cast<double>(n_ - 1);
        for (std::size_t i = 1; i < n_; ++i) {
            if (std::abs(x[i] - x[i - 1] - h_) > 1e-9 * h_) {
                throw InvalidParameter("linearized solver needs a uniform grid");
            }
        }
    }

    std::size_t unknowns() const { return kind_ == BcKind::PP ? n_ - 2 : n_ - 1; }

    LinearOperator assemble(const AdiabaticTerms& terms, double forcing_scale) const {
        const auto& p = terms.base.p;
        const auto& phi = terms.base.phi;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!(phi[i] > 0.0)) {
                std::ostringstream msg;
                msg << "base flux " << phi[i] << " at node " << i << " (t=" << terms.t
                    << ") is not positive; linearization is degenerate";
                throw DegenerateLinearization(msg.str());
            }
        }
        const double cs2 = pipe_.sound_speed * pipe_.sound_speed;
        std::vector<double> k(n_ - 1);
        for (std::size_t f = 0; f + 1 < n_; ++f) {
            k[f] = 1.0 / (h_ * pipe_.alpha * 0.5 * (phi[f] + phi[f + 1]));
        }
        const std::size_t m = unknowns();
        LinearOperator op{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0),
                          std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t i = j + 1;
            const bool half_cell = kind_ == BcKind::PPHI && i == n_ - 1;
            const double c = cs2 / (half_cell ? 0.5 * h_ : h_);
            const double k_right = half_cell ? 0.0 : k[i];
            op.lower[j] = j > 0 ? c * k[i - 1] * p[i - 1] : 0.0;
            op.diag[j] = -c * (k_right + k[i - 1]) * p[i];
            op.upper[j] = half_cell || j + 1 == m ? 0.0 : c * k_right * p[i + 1];
            op.forcing[j] = -cs2 * forcing_scale * terms.residual[i];
        }
        return op;
    }

    CorrectionSnapshot expand(const AdiabaticTerms& terms, std::span<const double> unknowns) const {
        CorrectionSnapshot out;
        out.t = terms.t;
        out.delta_p.assign(n_, 0.0);
        for (std::size_t j = 0; j < unknowns.size(); ++j) {
            out.delta_p[j + 1] = unknowns[j];
        }
        const auto& p = terms.base.p;
        const auto& phi = terms.base.phi;
        std::vector<double> q(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            q[i] = out.delta_p[i] * p[i];
        }
        out.delta_phi.resize(n_);
        const double a = pipe_.alpha;
        out.delta_phi[0] = -(-3.0 * q[0] + 4.0 * q[1] - q[2]) / (2.0 * h_ * a * phi[0]);
        for (std::size_t i = 1; i + 1 < n_; ++i) {
            out.delta_phi[i] = -(q[i + 1] - q[i - 1]) / (2.0 * h_ * a * phi[i]);
        }
        out.delta_phi[n_ - 1] =
            kind_ == BcKind::PPHI
                ? 0.0
                : -(3.0 * q[n_ - 1] - 4.0 * q[n_ - 2] + q[n_ - 3]) / (2.0 * h_ * a * phi[n_ - 1]);
        return out;
    }

private:
    const PipeModel& pipe_;
    BcKind kind_;
    std::size_t n_;
    double h_ = 0.0;
};

std::vector<double> steady_unknowns(const LinearOperator& op) {
    std::vector<double> rhs(op.forcing.size());
    for (std::size_t j = 0; j < rhs.size(); ++j) {
        rhs[j] = -op.forcing[j];
    }
    return numerics::solve_tridiagonal(op.lower, op.diag, op.upper, rhs);
}

// Trapezoidal step from (op_old, y) to op_new.
std::vector<double> trapezoidal_step(const LinearOperator& op_old, const LinearOperator& op_new,
                                     std::span<const double> y, double dt) {
    const std::size_t m = y.size();
    std::vector<double> lower(m), diag(m), upper(m), rhs(m);
    for (std::size_t j = 0; j < m; ++j) {
        double explicit_part = y[j] + 0.5 * dt * op_old.diag[j] * y[j];
        if (j > 0) explicit_part += 0.5 * dt * op_old.lower[j] * y[j - 1];
        if (j + 1 < m) explicit_part += 0.5 * dt * op_old.upper[j] * y[j + 1];
        rhs[j] = explicit_part + 0.5 * dt * (op_old.forcing[j] + op_new.forcing[j]);
        lower[j] = -0.5 * dt * op_new.lower[j];
        diag[j] = 1.0 - 0.5 * dt * op_new.diag[j];
        upper[j] = -0.5 * dt * op_new.upper[j];
    }
    return numerics::solve_tridiagonal(lower, diag, upper, rhs);
}

}  // namespace

CorrectionSnapshot linearized_steady(const PipeModel& pipe, const AdiabaticTerms& terms,
                                     BcKind kind, double forcing_scale) {
    const Discretization disc(pipe, terms.base.x, kind);
    const auto op = disc.assemble(terms, forcing_scale);
    return disc.expand(terms, steady_unknowns(op));
}

std::vector<CorrectionSnapshot> linearized_solve(const PipeModel& pipe,
                                                 const ParameterSchedule& schedule, BcKind kind,
                                                 std::span<const double> x_grid, double dt,
                                                 double t_end,
                                                 std::span<const double> output_times,
                                                 const LinearizedOptions& options) {
    pipe.validate();
    if (!(dt > 0.0) || !(t_end >= 0.0)) {
        throw InvalidParameter("linearized_solve needs dt > 0 and t_end >= 0");
    }
    std::vector<double> targets;
    for (double t : output_times) {
        if (t >= 0.0 && t <= t_end) targets.push_back(t);
    }
    std::sort(targets.begin(), targets.end());

    const Discretization disc(pipe, x_grid, kind);
    std::vector<CorrectionSnapshot> out;
    out.reserve(targets.size());

    if (options.drop_time_derivative) {
        for (double t : targets) {
            const auto terms = adiabatic_terms(pipe, schedule, t, x_grid, options.profile);
            out.push_back(disc.expand(terms, steady_unknowns(disc.assemble(terms, options.forcing_scale))));
        }
        return out;
    }

    double t = 0.0;
    AdiabaticTerms terms = adiabatic_terms(pipe, schedule, t, x_grid, options.profile);
    LinearOperator op = disc.assemble(terms, options.forcing_scale);
    std::vector<double> y(disc.unknowns(), 0.0);
    std::size_t next = 0;
    const double tiny = 1e-12 * std::max(1.0, t_end);
    auto record = [&] {
        while (next < targets.size() && targets[next] <= t + tiny) {
            auto snap = disc.expand(terms, y);
            snap.t = targets[next];
            out.push_back(std::move(snap));
            ++next;
        }
    };
    record();
    while (t < t_end - tiny) {
        double stop = t_end;
        if (next < targets.size()) stop = std::min(stop, targets[next]);
        double step = std::min(dt, stop - t);
        if (stop - (t + step) < 1e-6 * dt) step = stop - t;
        double t_new = t + step;
        if (std::abs(t_new - stop) <= tiny) t_new = stop;
        AdiabaticTerms next_terms = adiabatic_terms(pipe, schedule, t_new, x_grid, options.profile);
        LinearOperator next_op = disc.assemble(next_terms, options.forcing_scale);
        y = trapezoidal_step(op, next_op, y, step);
        t = t_new;
        terms = std::move(next_terms);
        op = std::move(next_op);
        record();
    }
    return out;
}

}  // namespace gaspipe
