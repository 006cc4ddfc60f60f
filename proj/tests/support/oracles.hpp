#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library's numerics.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

// Classic RK4 on (G, psi) with `steps` uniform sub-steps per grid cell.
struct Profile {
    std::vector<double> g;
    std::vector<double> psi;
};

inline Profile rk4_profile(double lambda, double g0, const std::vector<double>& x, int steps = 64) {
    auto rhs = [lambda](double g) { return 2.0 * g * g - lambda * std::sqrt(g); };
    Profile out;
    double g = g0, psi = 0.0;
    out.g.push_back(g);
    out.psi.push_back(psi);
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double h = (x[i] - x[i - 1]) / steps;
        for (int k = 0; k < steps; ++k) {
            const double k1 = rhs(g);
            const double k2 = rhs(g + 0.5 * h * k1);
            const double k3 = rhs(g + 0.5 * h * k2);
            const double k4 = rhs(g + h * k3);
            // psi' = -G, integrated with the same stages
            psi -= h / 6.0 * (g + 2.0 * (g + 0.5 * h * k1) + 2.0 * (g + 0.5 * h * k2) + (g + h * k3));
            g += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out.g.push_back(g);
        out.psi.push_back(psi);
    }
    return out;
}

// Antiderivative of 1 / (lambda sqrt(z) - 2 z^2) for lambda > 0, written out
// from the substitution s = sqrt(z), a = (lambda/2)^(1/3).
inline double closed_form(double z, double lambda) {
    const double a = std::cbrt(lambda / 2.0);
    const double s = std::sqrt(z);
    const double value = -std::log(std::abs(a - s)) + 0.5 * std::log(a * a + a * s + z) +
                         std::sqrt(3.0) * std::atan((1.0 + 2.0 * s / a) / std::sqrt(3.0));
    return value / (3.0 * a * a);
}

// Solves closed_form(g0) - closed_form(G) = x for G between g0 and the
// fixed point (monotone there) by bisection.
inline double invert_closed_form(double lambda, double g0, double x) {
    const double fixed = std::pow(lambda / 2.0, 2.0 / 3.0);
    const double f0 = closed_form(g0, lambda);
    double lo, hi;
    if (g0 < fixed) {
        lo = 1e-300;
        hi = g0;
    } else {
        lo = g0;
        hi = g0 * 1e6;
    }
    // target(G) = f0 - F(G) - x, monotone in G on the branch
    auto target = [&](double g) { return f0 - closed_form(g, lambda) - x; };
    double t_lo = target(lo);
    for (int k = 0; k < 400; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double t_mid = target(mid);
        if ((t_mid > 0.0) == (t_lo > 0.0)) {
            lo = mid;
            t_lo = t_mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-17 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

// Composite Simpson with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return sum * h / 3.0;
}

// Composite Simpson on sampled data over a uniform grid (odd point count);
// returns the running integral at the even nodes only.
inline double simpson_samples(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size() - 1;
    const double h = (x.back() - x.front()) / static_cast<double>(n);
    double sum = y.front() + y.back();
    for (std::size_t i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * y[i];
    return sum * h / 3.0;
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Fourth-order central difference.
inline double central_difference4(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}

// The modulated schedule written directly from its definition.
inline double schedule_lambda(double lambda0, double tau, double t) {
    return lambda0 * (2.0 + std::cos(2.0 * std::numbers::pi * t / tau)) * std::cos(std::numbers::pi * t / tau);
}

inline double rel_diff(double a, double b, double floor = 1e-300) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// Deterministic generator for property tests.
struct Rng {
    explicit Rng(std::uint64_t seed) : engine(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
    std::mt19937_64 engine;
};

}  // namespace oracle
