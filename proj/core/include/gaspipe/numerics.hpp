#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gaspipe/model.hpp"

namespace gaspipe::numerics {

/// Running integral F(x_i) = int_{x_0}^{x_i} f dx on an arbitrary strictly
/// increasing grid. Each cell is integrated exactly for the cubic through the
/// four nearest nodes, so the rule is fourth order. Needs >= 4 nodes; falls
/// back to the trapezoid rule for 2-3 nodes.
std::vector<double> cumulative_integral(std::span<const double> x, std::span<const double> f);

/// int_{x_0}^{x_n} f dx with the same rule.
double integral(std::span<const double> x, std::span<const double> f);

/// Running integral from the right end: int_{x_i}^{x_n} f dx.
std::vector<double> reverse_cumulative_integral(std::span<const double> x,
                                                std::span<const double> f);

/// Derivative at sample i from a least-squares polynomial of `degree` over
/// the `2 * half_window + 1` nearest samples (window shifted at the ends).
double local_poly_derivative(std::span<const double> t, std::span<const double> y, std::size_t i,
                             std::size_t half_window, std::size_t degree);

/// Same smoothing applied to every sample.
std::vector<double> local_poly_derivatives(std::span<const double> t, std::span<const double> y,
                                           std::size_t half_window, std::size_t degree);

struct SmoothingOptions {
    double step = 1e-3;
    std::size_t half_window = 3;
    std::size_t degree = 4;
};

/// Derivative of a scalar function sampled on a symmetric stencil around t.
double smoothed_derivative(const ScalarFn& f, double t, const SmoothingOptions& options = {});

/// Thomas algorithm. `lower[i]` couples row i to i-1 (lower[0] unused),
/// `upper[i]` couples row i to i+1 (last unused). Throws NumericalError on a
/// zero pivot.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

/// Linear interpolation on a strictly increasing grid (clamped).
double interpolate_linear(std::span<const double> x, std::span<const double> y, double at);

}  // namespace gaspipe::numerics
