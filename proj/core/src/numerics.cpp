#include "gaspipe/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "gaspipe/errors.hpp"

namespace gaspipe::numerics {
namespace {

void check_sizes(std::span<const double> x, std::span<const double> f) {
    if (x.size() != f.size() || x.size() < 2) {
        throw AlignmentError("quadrature needs matching arrays with >= 2 nodes");
    }
}

// Integral of the cubic interpolating (xs[k], fs[k]) over [a, b], evaluated
// with two-point Gauss-Legendre (exact for cubics).
double cubic_cell_integral(const std::array<double, 4>& xs, const std::array<double, 4>& fs,
                           double a, double b) {
    static const double g = 1.0 / std::sqrt(3.0);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (double node : {mid - half * g, mid + half * g}) {
        double value = 0.0;
        for (int k = 0; k < 4; ++k) {
            double basis = 1.0;
            for (int m = 0; m < 4; ++m) {
                if (m != k) {
                    basis *= (node - xs[m]) / (xs[k] - xs[m]);
                }
            }
            value += fs[k] * basis;
        }
        sum += value;
    }
    return half * sum;
}

std::vector<double> cell_integrals(std::span<const double> x, std::span<const double> f) {
    check_sizes(x, f);
    const std::size_t n = x.size();
    std::vector<double> cells(n - 1);
    if (n < 4) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            cells[i] = 0.5 * (x[i + 1] - x[i]) * (f[i] + f[i + 1]);
        }
        return cells;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        // Stencil i-1..i+2 clamped into [0, n-1].
        std::size_t start = i == 0 ? 0 : i - 1;
        start = std::min(start, n - 4);
        std::array<double, 4> xs{};
        std::array<double, 4> fs{};
        for (std::size_t k = 0; k < 4; ++k) {
            xs[k] = x[start + k];
            fs[k] = f[start + k];
        }
        cells[i] = cubic_cell_integral(xs, fs, x[i], x[i + 1]);
    }
    return cells;
}

}  // namespace

std::vector<double> cumulative_integral(std::span<const double> x, std::span<const double> f) {
    const auto cells = cell_integrals(x, f);
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out[i + 1] = out[i] + cells[i];
    }
    return out;
}

double integral(std::span<const double> x, std::span<const double> f) {
    return cumulative_integral(x, f).back();
}

std::vector<double> reverse_cumulative_integral(std::span<const double> x,
                                                std::span<const double> f) {
    const auto cells = cell_integrals(x, f);
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t i = cells.size(); i-- > 0;) {
        out[i] = out[i + 1] + cells[i];
    }
    return out;
}

double local_poly_derivative(std::span<const double> t, std::span<const double> y, std::size_t i,
                             std::size_t half_window, std::size_t degree) {
    if (t.size() != y.size() || i >= t.size()) {
        throw AlignmentError("derivative samples misaligned");
    }
    const std::size_t n = t.size();
    const std::size_t width = std::min(n, 2 * half_window + 1);
    if (width < degree + 1) {
        throw InvalidParameter("window too small for polynomial degree " + std::to_string(degree));
    }
    std::size_t start = i >= half_window ? i - half_window : 0;
    start = std::min(start, n - width);

    // Shift and scale the abscissa for conditioning; derivative at t[i].
    const double scale = std::max(std::abs(t[start + width - 1] - t[start]), 1e-300);
    Eigen::MatrixXd a(static_cast<Eigen::Index>(width), static_cast<Eigen::Index>(degree + 1));
    Eigen::VectorXd b(static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < width; ++r) {
        const double s = (t[start + r] - t[i]) / scale;
        double power = 1.0;
        for (std::size_t c = 0; c <= degree; ++c) {
            a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = power;
            power *= s;
        }
        b(static_cast<Eigen::Index>(r)) = y[start + r];
    }
    const Eigen::VectorXd coeff = a.colPivHouseholderQr().solve(b);
    return coeff(1) / scale;
}

std::vector<double> local_poly_derivatives(std::span<const double> t, std::span<const double> y,
                                           std::size_t half_window, std::size_t degree) {
    std::vector<double> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        out[i] = local_poly_derivative(t, y, i, half_window, degree);
    }
    return out;
}

double smoothed_derivative(const ScalarFn& f, double t, const SmoothingOptions& options) {
    const std::size_t width = 2 * options.half_window + 1;
    std::vector<double> ts(width);
    std::vector<double> ys(width);
    for (std::size_t k = 0; k < width; ++k) {
        ts[k] = t + (static_cast<double>(k) - static_cast<double>(options.half_window)) * options.step;
        ys[k] = f(ts[k]);
    }
    return local_poly_derivative(ts, ys, options.half_window, options.half_window, options.degree);
}

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n || n == 0) {
        throw AlignmentError("tridiagonal system has inconsistent sizes");
    }
    std::vector<double> c(n);
    std::vector<double> d(n);
    double pivot = diag[0];
    if (pivot == 0.0) {
        throw NumericalError("zero pivot in tridiagonal solve at row 0");
    }
    c[0] = upper[0] / pivot;
    d[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i] * c[i - 1];
        if (pivot == 0.0) {
            throw NumericalError("zero pivot in tridiagonal solve at row " + std::to_string(i));
        }
        c[i] = i + 1 < n ? upper[i] / pivot : 0.0;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot;
    }
    std::vector<double> x(n);
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    return x;
}

double interpolate_linear(std::span<const double> x, std::span<const double> y, double at) {
    if (x.size() != y.size() || x.empty()) {
        throw AlignmentError("interpolation arrays misaligned");
    }
    if (at <= x.front()) return y.front();
    if (at >= x.back()) return y.back();
    const auto it = std::upper_bound(x.begin(), x.end(), at);
    const std::size_t j = static_cast<std::size_t>(it - x.begin());
    const double w = (at - x[j - 1]) / (x[j] - x[j - 1]);
    return (1.0 - w) * y[j - 1] + w * y[j];
}

}  // namespace gaspipe::numerics
