#include "gaspipe/reference_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gaspipe/errors.hpp"
#include "gaspipe/numerics.hpp"

namespace gaspipe {
namespace {

struct FaceFlux {
    double value;
    double d_left;   // dF / dp_i
    double d_right;  // dF / dp_{i+1}
};

FaceFlux closure(double p_left, double p_right, double dx, double alpha, double eps) {
    const double g = (p_right - p_left) / dx;
    const double pbar = 0.5 * (p_left + p_right);
    const double soft = g * g + eps * eps;
    const double amplitude = std::sqrt(2.0 * pbar / alpha);
    const double quarter = std::pow(soft, -0.25);
    FaceFlux f;
    f.value = -g * amplitude * quarter;
    const double d_pbar = f.value / (2.0 * pbar);
    const double d_g = -amplitude * quarter * (0.5 * g * g + eps * eps) / soft;
    f.d_left = 0.5 * d_pbar - d_g / dx;
    f.d_right = 0.5 * d_pbar + d_g / dx;
    return f;
}

double point_flux(double p, double g, double alpha, double eps) {
    return -g * std::sqrt(2.0 * p / alpha) * std::pow(g * g + eps * eps, -0.25);
}

void check_positive(std::span<const double> p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0.0)) {
            std::ostringstream msg;
            msg << "non-positive pressure " << p[i] << " at node " << i;
            throw StateInvalid(msg.str());
        }
    }
}

}  // namespace

std::vector<double> flux_closure(std::span<const double> p, double dx, const PipeModel& pipe,
                                 double epsilon) {
    check_positive(p);
    std::vector<double> faces(p.size() - 1);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        faces[i] = closure(p[i], p[i + 1], dx, pipe.alpha, epsilon).value;
    }
    return faces;
}

std::vector<double> nodal_flux(std::span<const double> p, double dx, const PipeModel& pipe,
                               double epsilon) {
    check_positive(p);
    const std::size_t n = p.size();
    std::vector<double> out(n);
    if (n < 3) {
        const double g = (p[1] - p[0]) / dx;
        out[0] = point_flux(p[0], g, pipe.alpha, epsilon);
        out[1] = point_flux(p[1], g, pipe.alpha, epsilon);
        return out;
    }
    out[0] = point_flux(p[0], (-3.0 * p[0] + 4.0 * p[1] - p[2]) / (2.0 * dx), pipe.alpha, epsilon);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = point_flux(p[i], (p[i + 1] - p[i - 1]) / (2.0 * dx), pipe.alpha, epsilon);
    }
    out[n - 1] = point_flux(p[n - 1], (3.0 * p[n - 1] - 4.0 * p[n - 2] + p[n - 3]) / (2.0 * dx),
                            pipe.alpha, epsilon);
    return out;
}

ReferenceSolver::ReferenceSolver(PipeModel pipe, std::vector<double> x_grid, BoundarySpec bc,
                                 ReferenceOptions options)
    : pipe_(pipe), x_(std::move(x_grid)), bc_(std::move(bc)), options_(options) {
    pipe_.validate();
    if (x_.size() < 3) {
        throw InvalidParameter("reference solver needs at least 3 nodes");
    }
    if (!bc_.left || !bc_.right) {
        throw InvalidParameter("reference solver needs both boundary series");
    }
    h_ = (x_.back() - x_.front()) / static_cast<double>(x_.size() - 1);
    for (std::size_t i = 1; i < x_.size(); ++i) {
        if (std::abs(x_[i] - x_[i - 1] - h_) > 1e-9 * h_) {
            throw InvalidParameter("reference solver needs a uniform grid");
        }
    }
    eps_ = options_.epsilon * pipe_.ref_pressure / pipe_.length;
}

std::size_t ReferenceSolver::last_unknown() const {
    return bc_.kind == BcKind::PP ? x_.size() - 2 : x_.size() - 1;
}

void ReferenceSolver::apply_boundary(std::vector<double>& p, double t) const {
    p.front() = bc_.left(t);
    if (bc_.kind == BcKind::PP) {
        p.back() = bc_.right(t);
    }
}

PdeState ReferenceSolver::initial_state(const FieldSnapshot& initial) const {
    if (initial.p.size() != x_.size()) {
        throw AlignmentError("initial snapshot does not match the solver grid");
    }
    check_positive(initial.p);
    PdeState state;
    state.t = initial.t;
    state.p = initial.p;
    return state;
}

double ReferenceSolver::line_pack(const PdeState& state) const {
    double sum = 0.0;
    for (std::size_t i = 1; i + 1 < x_.size(); ++i) {
        sum += h_ * state.p[i];
    }
    if (bc_.kind == BcKind::PPHI) {
        sum += 0.5 * h_ * state.p.back();
    }
    return sum;
}

FieldSnapshot ReferenceSolver::snapshot(const PdeState& state) const {
    FieldSnapshot snap;
    snap.t = state.t;
    snap.x = x_;
    snap.p = state.p;
    snap.phi = nodal_flux(state.p, h_, pipe_, eps_);
    if (bc_.kind == BcKind::PPHI) {
        snap.phi.back() = bc_.right(state.t);
    }
    return snap;
}

double ReferenceSolver::explicit_limit(const PdeState& state) const {
    const double cs2 = pipe_.sound_speed * pipe_.sound_speed;
    const std::size_t n = x_.size();
    std::vector<FaceFlux> faces(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        faces[i] = closure(state.p[i], state.p[i + 1], h_, pipe_.alpha, eps_);
    }
    double worst = 0.0;
    for (std::size_t i = 1; i <= last_unknown(); ++i) {
        const double weight = i + 1 < n ? h_ : 0.5 * h_;
        const double out = i + 1 < n ? std::abs(faces[i].d_left) : 0.0;
        worst = std::max(worst, (out + std::abs(faces[i - 1].d_right)) / weight);
    }
    return worst > 0.0 ? 1.0 / (cs2 * worst) : 1e300;
}

PdeState ReferenceSolver::advance(const PdeState& state, double dt) const {
    if (!(dt > 0.0)) {
        throw InvalidParameter("time step must be positive");
    }
    if (options_.scheme == TimeScheme::Explicit) {
        PdeState current = state;
        double inflow = 0.0;
        double outflow = 0.0;
        int substeps = 0;
        double remaining = dt;
        while (remaining > 0.0) {
            const double limit = options_.explicit_safety * explicit_limit(current);
            const std::size_t pieces = static_cast<std::size_t>(std::ceil(remaining / limit - 1e-12));
            const double step = pieces <= 1 ? remaining : remaining / static_cast<double>(pieces);
            current = explicit_step(current, step);
            inflow += current.inflow;
            outflow += current.outflow;
            remaining = pieces <= 1 ? 0.0 : remaining - step;
            ++substeps;
        }
        current.t = state.t + dt;
        current.inflow = inflow;
        current.outflow = outflow;
        current.substeps = substeps;
        return current;
    }
    return implicit_step(state, dt, 0);
}

PdeState ReferenceSolver::explicit_step(const PdeState& state, double dt) const {
    const double cs2 = pipe_.sound_speed * pipe_.sound_speed;
    const std::size_t n = x_.size();
    const auto faces = flux_closure(state.p, h_, pipe_, eps_);
    PdeState next;
    next.t = state.t + dt;
    next.p = state.p;
    const double outlet_flux = bc_.kind == BcKind::PP ? faces[n - 2] : bc_.right(state.t);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        next.p[i] = state.p[i] - dt * cs2 * (faces[i] - faces[i - 1]) / h_;
    }
    if (bc_.kind == BcKind::PPHI) {
        next.p[n - 1] = state.p[n - 1] - dt * cs2 * (outlet_flux - faces[n - 2]) / (0.5 * h_);
    }
    apply_boundary(next.p, next.t);
    check_positive(next.p);
    next.inflow = dt * cs2 * faces[0];
    next.outflow = dt * cs2 * outlet_flux;
    next.substeps = 1;
    return next;
}

PdeState ReferenceSolver::implicit_step(const PdeState& state, double dt, int depth) const {
    PdeState out;
    if (newton(state, dt, out)) {
        out.substeps = 1;
        return out;
    }
    if (depth >= options_.max_halvings) {
        std::ostringstream msg;
        msg << "implicit step from t=" << state.t << " failed after " << depth
            << " halvings (dt=" << dt << ", Newton iterations=" << out.newton_iterations << ")";
        throw StepError(msg.str());
    }
    const PdeState half = implicit_step(state, 0.5 * dt, depth + 1);
    PdeState full = implicit_step(half, 0.5 * dt, depth + 1);
    full.inflow += half.inflow;
    full.outflow += half.outflow;
    full.newton_iterations += half.newton_iterations;
    full.substeps += half.substeps;
    full.t = state.t + dt;
    return full;
}

bool ReferenceSolver::newton(const PdeState& state, double dt, PdeState& out) const {
    const double cs2 = pipe_.sound_speed * pipe_.sound_speed;
    const std::size_t n = x_.size();
    const std::size_t first = 1;
    const std::size_t last = last_unknown();
    const std::size_t m = last - first + 1;
    const bool flux_outlet = bc_.kind == BcKind::PPHI;
    const double t_new = state.t + dt;
    const double outlet_flux = flux_outlet ? bc_.right(t_new) : 0.0;

    out.t = t_new;
    out.p = state.p;
    apply_boundary(out.p, t_new);
    if (!(out.p.front() > 0.0) || !(out.p.back() > 0.0)) {
        throw StateInvalid("boundary pressure is not positive");
    }

    std::vector<FaceFlux> faces(n - 1);
    std::vector<double> lower(m), diag(m), upper(m), rhs(m);
    auto evaluate = [&] {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            faces[i] = closure(out.p[i], out.p[i + 1], h_, pipe_.alpha, eps_);
        }
        double worst = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t i = first + k;
            const bool half_cell = flux_outlet && i == n - 1;
            const double weight = half_cell ? 0.5 * h_ : h_;
            const double right_flux = half_cell ? outlet_flux : faces[i].value;
            const double residual =
                weight * (out.p[i] - state.p[i]) + dt * cs2 * (right_flux - faces[i - 1].value);
            rhs[k] = -residual;
            worst = std::max(worst, std::abs(residual));
            const double d_right_self = half_cell ? 0.0 : faces[i].d_left;
            diag[k] = weight + dt * cs2 * (d_right_self - faces[i - 1].d_right);
            lower[k] = -dt * cs2 * faces[i - 1].d_left;
            upper[k] = half_cell ? 0.0 : dt * cs2 * faces[i].d_right;
        }
        return worst;
    };

    const double scale = *std::max_element(out.p.begin(), out.p.end());
    for (int iter = 1; iter <= options_.max_newton; ++iter) {
        evaluate();
        std::vector<double> delta;
        try {
            delta = numerics::solve_tridiagonal(lower, diag, upper, rhs);
        } catch (const NumericalError&) {
            out.newton_iterations = iter;
            return false;
        }
        double step = 0.0;
        double damping = 1.0;
        for (int k = 0; k < 30; ++k) {
            bool positive = true;
            for (std::size_t j = 0; j < m; ++j) {
                if (!(out.p[first + j] + damping * delta[j] > 0.0)) {
                    positive = false;
                    break;
                }
            }
            if (positive) break;
            damping *= 0.5;
        }
        for (std::size_t j = 0; j < m; ++j) {
            out.p[first + j] += damping * delta[j];
            step = std::max(step, std::abs(damping * delta[j]));
        }
        if (!std::isfinite(step)) {
            out.newton_iterations = iter;
            return false;
        }
        if (damping == 1.0 && step <= options_.newton_tol * scale) {
            evaluate();
            out.newton_iterations = iter;
            out.inflow = dt * cs2 * faces.front().value;
            out.outflow = dt * cs2 * (flux_outlet ? outlet_flux : faces.back().value);
            for (double v : out.p) {
                if (!(v > 0.0)) return false;
            }
            return true;
        }
    }
    out.newton_iterations = options_.max_newton;
    return false;
}

std::vector<FieldSnapshot> solve_scenario(const PipeModel& pipe, const BoundarySpec& bc,
                                          const FieldSnapshot& initial, double t_end, double dt,
                                          std::span<const double> output_times,
                                          const ReferenceOptions& options,
                                          const StepObserver& observer) {
    if (!(dt > 0.0) || !(t_end >= initial.t)) {
        throw InvalidParameter("solve_scenario needs dt > 0 and t_end >= t0");
    }
    ReferenceSolver solver(pipe, initial.x, bc, options);
    std::vector<double> targets;
    for (double t : output_times) {
        if (t >= initial.t && t <= t_end) targets.push_back(t);
    }
    std::sort(targets.begin(), targets.end());

    std::vector<FieldSnapshot> out;
    out.reserve(targets.size());
    PdeState state = solver.initial_state(initial);
    std::size_t next = 0;
    const double tiny = 1e-12 * std::max(1.0, std::abs(t_end));
    while (next < targets.size() && targets[next] <= state.t + tiny) {
        out.push_back(solver.snapshot(state));
        ++next;
    }
    while (state.t < t_end - tiny) {
        double stop = t_end;
        if (next < targets.size()) stop = std::min(stop, targets[next]);
        double step = std::min(dt, stop - state.t);
        // Avoid a sliver step just before a stop.
        if (stop - (state.t + step) < 1e-6 * dt) step = stop - state.t;
        PdeState after = solver.advance(state, step);
        if (std::abs(after.t - stop) <= tiny) after.t = stop;
        if (observer) observer(solver, state, after);
        state = std::move(after);
        while (next < targets.size() && targets[next] <= state.t + tiny) {
            auto snap = solver.snapshot(state);
            snap.t = targets[next];
            out.push_back(std::move(snap));
            ++next;
        }
    }
    return out;
}

}  // namespace gaspipe
