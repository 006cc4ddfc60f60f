#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gaspipe/model.hpp"
#include "gaspipe/profile.hpp"

namespace gaspipe {

struct CalibrationOptions {
    // Local polynomial fit used for every time derivative.
    std::size_t half_window = 6;
    std::size_t degree = 6;
    // Initial multiplicative half-width of the G0 bracket around the warm start.
    double bracket_factor = 1.05;
    int max_expansions = 80;
    ProfileOptions profile{};
};

/// Recovered parameter samples plus an interpolating schedule.
struct CalibrationResult {
    std::vector<double> t;
    std::vector<double> lambda;
    std::vector<double> lambda_dot;
    std::vector<double> lambda_cumulative;
    std::vector<double> g0;
    std::vector<double> g0_dot;
    ParameterSchedule schedule;
};

/// Recovers (lambda(t), G0(t)) from boundary series sampled on `time_grid`.
///
/// lambda comes from the log-derivative of the inlet pressure; G0 from a
/// bracketed scalar root solve per sample, warm-started from the previous
/// sample, against the outlet pressure (PP) or outlet flux (PPHI). The inlet
/// pressure at the first sample must equal the pipe's reference pressure.
///
/// Throws CalibrationError when no bracket is found (message carries the
/// searched interval) or when the residual is not monotone across it.
CalibrationResult calibrate(const PipeModel& pipe, const BoundarySpec& bc,
                            std::span<const double> time_grid,
                            const CalibrationOptions& options = {});

}  // namespace gaspipe
