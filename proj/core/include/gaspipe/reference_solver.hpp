#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gaspipe/model.hpp"

namespace gaspipe {

enum class TimeScheme { Implicit, Explicit };

struct ReferenceOptions {
    TimeScheme scheme = TimeScheme::Implicit;
    // Gradient regularization, in units of p0 / L.
    double epsilon = 1e-8;
    // Newton stops when max|update| <= newton_tol * max|p|.
    double newton_tol = 1e-13;
    int max_newton = 40;
    // Step rejections allowed (each halves dt) before giving up.
    int max_halvings = 12;
    // Fraction of the explicit stability limit used per sub-step.
    double explicit_safety = 0.9;
};

/// Pressure on the solver grid plus the accounting of the step that produced it.
struct PdeState {
    double t = 0.0;
    std::vector<double> p;
    // c_s^2 * int F dt through the inlet / outlet faces during the last step.
    double inflow = 0.0;
    double outflow = 0.0;
    int newton_iterations = 0;
    int substeps = 0;
};

/// Face fluxes phi_{i+1/2} = -g sqrt(2 pbar / alpha) (g^2 + eps^2)^(-1/4) with
/// the centered gradient g = (p_{i+1} - p_i)/dx and pbar the face average;
/// equals sign(-g) sqrt(2 pbar |g| / alpha) away from g = 0.
/// Throws StateInvalid on non-positive pressure.
std::vector<double> flux_closure(std::span<const double> p, double dx, const PipeModel& pipe,
                                 double epsilon);

/// Node-centred flux from the same closure (centered gradients inside,
/// second-order one-sided at the ends).
std::vector<double> nodal_flux(std::span<const double> p, double dx, const PipeModel& pipe,
                               double epsilon);

/// Finite-volume solver for c_s^-2 dp/dt + dphi/dx = 0 with the friction
/// closure for phi, on a uniform grid. Boundary nodes carry the prescribed
/// pressure; for PPHI the outlet node is a half cell closed by the prescribed
/// face flux.
class ReferenceSolver {
public:
    ReferenceSolver(PipeModel pipe, std::vector<double> x_grid, BoundarySpec bc,
                    ReferenceOptions options = {});

    PdeState initial_state(const FieldSnapshot& initial) const;

    /// One conservative step of size dt (sub-stepped when needed).
    PdeState advance(const PdeState& state, double dt) const;

    /// Discrete line pack over the unknown cells.
    double line_pack(const PdeState& state) const;

    FieldSnapshot snapshot(const PdeState& state) const;

    /// Largest stable forward-Euler step, before the safety factor.
    double explicit_limit(const PdeState& state) const;

    const std::vector<double>& grid() const { return x_; }
    double spacing() const { return h_; }
    double epsilon() const { return eps_; }

private:
    PdeState implicit_step(const PdeState& state, double dt, int depth) const;
    bool newton(const PdeState& state, double dt, PdeState& out) const;
    PdeState explicit_step(const PdeState& state, double dt) const;
    void apply_boundary(std::vector<double>& p, double t) const;
    std::size_t last_unknown() const;

    PipeModel pipe_;
    std::vector<double> x_;
    BoundarySpec bc_;
    ReferenceOptions options_;
    double h_ = 0.0;
    double eps_ = 0.0;
};

using StepObserver = std::function<void(const ReferenceSolver&, const PdeState& before,
                                        const PdeState& after)>;

/// Marches from `initial` to `t_end` with nominal step dt, shortening steps
/// to land on each output time. Returns one snapshot per output time in
/// [initial.t, t_end].
std::vector<FieldSnapshot> solve_scenario(const PipeModel& pipe, const BoundarySpec& bc,
                                          const FieldSnapshot& initial, double t_end, double dt,
                                          std::span<const double> output_times,
                                          const ReferenceOptions& options = {},
                                          const StepObserver& observer = {});

}  // namespace gaspipe
