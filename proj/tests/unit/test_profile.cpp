#include "doctest.h"

#include <cmath>
#include <vector>

#include "gaspipe/errors.hpp"
#include "gaspipe/profile.hpp"
#include "oracles.hpp"

using namespace gaspipe;

TEST_CASE("stationary profile has the closed form") {
    const auto x = uniform_grid(1.0, 101);
    const auto prof = g_profile_ode(0.0, 0.3, x);
    CHECK(prof.g.back() == doctest::Approx(0.75).epsilon(1e-10));
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(prof.g[i] == doctest::Approx(0.3 / (1.0 - 0.6 * x[i])).epsilon(1e-10));
        // psi = 0.5 log(1 - 2 G0 x)
        CHECK(prof.psi[i] == doctest::Approx(0.5 * std::log(1.0 - 0.6 * x[i])).epsilon(1e-10));
    }
}

TEST_CASE("profile invariants") {
    const auto x = uniform_grid(1.0, 51);
    for (double lambda : {-0.2, 0.0, 0.15, 1.0}) {
        const auto prof = g_profile_ode(lambda, 0.3, x);
        CHECK(prof.g[0] == 0.3);
        CHECK(prof.psi[0] == 0.0);
        for (std::size_t i = 1; i < x.size(); ++i) {
            CHECK(prof.g[i] > 0.0);
            CHECK(prof.psi[i] < prof.psi[i - 1]);
        }
        // sign of G' follows the slope at every node
        for (std::size_t i = 1; i + 1 < x.size(); ++i) {
            const double slope = g_slope(prof.g[i], lambda);
            const double observed = prof.g[i + 1] - prof.g[i - 1];
            if (std::abs(slope) > 1e-9) CHECK((slope > 0) == (observed > 0));
        }
    }
}

TEST_CASE("fixed point gives a constant profile") {
    for (double lambda : {0.1, 0.5, 2.0}) {
        const double g0 = g_fixed_point(lambda);
        CHECK(g0 == doctest::Approx(std::pow(lambda / 2.0, 2.0 / 3.0)));
        const auto prof = g_profile_ode(lambda, g0, uniform_grid(1.0, 11));
        for (double g : prof.g) CHECK(g == doctest::Approx(g0).epsilon(1e-12));
    }
}

TEST_CASE("closed-form antiderivative") {
    CHECK(f_antiderivative(0.2, 1.0) - f_antiderivative(0.2, 1.0) == 0.0);
    // matches the independently written expression on both sides of the fixed point
    for (double z : {0.05, 0.2, 0.5, 0.9, 2.0}) {
        CHECK(f_antiderivative(z, 1.0) == doctest::Approx(oracle::closed_form(z, 1.0)).epsilon(1e-13));
    }
    // derivative is +1 / (lambda sqrt z - 2 z^2)
    const double z = 0.2, lambda = 1.0;
    const double fd = oracle::central_difference4([&](double v) { return f_antiderivative(v, lambda); }, z, 1e-4);
    CHECK(fd == doctest::Approx(1.0 / (lambda * std::sqrt(z) - 2.0 * z * z)).epsilon(1e-9));
    CHECK_THROWS_AS(f_antiderivative(0.2, 0.0), UnsupportedBranch);
    CHECK_THROWS_AS(f_antiderivative(0.2, -1.0), UnsupportedBranch);
    CHECK_THROWS_AS(f_antiderivative(-0.1, 1.0), DomainError);
    CHECK_THROWS_AS(f_antiderivative(g_fixed_point(1.0), 1.0), DomainError);
}

TEST_CASE("ODE profile agrees with closed-form inversion") {
    const auto x = uniform_grid(1.0, 201);
    struct Case {
        double lambda, g0;
    };
    for (const auto c : {Case{1.0, 0.45}, Case{0.15, 0.3}, Case{0.5, 0.2}, Case{0.8, 0.4}, Case{0.15, 0.1}}) {
        const auto prof = g_profile_ode(c.lambda, c.g0, x);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double g = oracle::invert_closed_form(c.lambda, c.g0, x[i]);
            CHECK(oracle::rel_diff(prof.g[i], g) < 1e-8);
        }
    }
}

TEST_CASE("ODE profile agrees with an independent RK4") {
    const auto x = uniform_grid(1.0, 41);
    for (double lambda : {-0.15, 0.0, 0.05, 0.15}) {
        const auto prof = g_profile_ode(lambda, 0.3, x);
        const auto ref = oracle::rk4_profile(lambda, 0.3, x, 200);
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(oracle::rel_diff(prof.g[i], ref.g[i]) < 1e-10);
            CHECK(std::abs(prof.psi[i] - ref.psi[i]) < 1e-10);
        }
    }
}

TEST_CASE("profile errors") {
    const auto x = uniform_grid(1.0, 21);
    // 2 G0 L >= 1 blows up before the outlet when lambda = 0
    CHECK_THROWS_AS(g_profile_ode(0.0, 0.6, x), ProfileSingular);
    // strong positive lambda drives G to zero inside the pipe
    CHECK_THROWS_AS(g_profile_ode(5.0, 0.05, x), ProfileDegenerate);
    CHECK_THROWS_AS(g_profile_ode(0.1, 0.0, x), InvalidParameter);
    const std::vector<double> bad{0.1, 0.5};
    CHECK_THROWS_AS(g_profile_ode(0.1, 0.3, bad), InvalidParameter);
}

TEST_CASE("sensitivity identities") {
    const auto x = uniform_grid(1.0, 51);
    auto prof = g_sensitivities(g_profile_ode(0.1, 0.3, x));
    REQUIRE(prof.has_sensitivities());
    CHECK(prof.dg_dg0[0] == 1.0);
    CHECK(prof.dg_dlambda[0] == 0.0);

    auto stationary = g_sensitivities(g_profile_ode(0.0, 0.3, x));
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double g = stationary.g[i];
        CHECK(stationary.dg_dg0[i] == doctest::Approx(g * g / 0.09).epsilon(1e-9));
    }
}

TEST_CASE("sensitivities match finite differences of re-solved profiles") {
    const std::vector<double> x{0.0, 0.25, 0.5, 0.75, 1.0};
    const auto prof = g_sensitivities(g_profile_ode(0.1, 0.3, x));
    const double h = 1e-6;
    const auto up_l = oracle::rk4_profile(0.1 + h, 0.3, x, 400);
    const auto dn_l = oracle::rk4_profile(0.1 - h, 0.3, x, 400);
    const auto up_g = oracle::rk4_profile(0.1, 0.3 + h, x, 400);
    const auto dn_g = oracle::rk4_profile(0.1, 0.3 - h, x, 400);
    const std::size_t mid = 2;
    CHECK(oracle::rel_diff(prof.dg_dlambda[mid], (up_l.g[mid] - dn_l.g[mid]) / (2 * h)) < 1e-5);
    CHECK(oracle::rel_diff(prof.dg_dg0[mid], (up_g.g[mid] - dn_g.g[mid]) / (2 * h)) < 1e-5);
}

TEST_CASE("sensitivities at the fixed point use the variational equations") {
    const double lambda = 0.3;
    const double g0 = g_fixed_point(lambda);
    const std::vector<double> x{0.0, 0.5, 1.0};
    const auto prof = g_sensitivities(g_profile_ode(lambda, g0, x));
    const double h = 1e-5;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double fd_l = (oracle::rk4_profile(lambda + h, g0, x, 400).g[i] -
                             oracle::rk4_profile(lambda - h, g0, x, 400).g[i]) / (2 * h);
        const double fd_g = (oracle::rk4_profile(lambda, g0 + h, x, 400).g[i] -
                             oracle::rk4_profile(lambda, g0 - h, x, 400).g[i]) / (2 * h);
        CHECK(oracle::rel_diff(prof.dg_dlambda[i], fd_l) < 1e-6);
        CHECK(oracle::rel_diff(prof.dg_dg0[i], fd_g) < 1e-6);
    }
}

TEST_CASE("exact fields examples") {
    const auto pipe = PipeModel::dimensionless(8.57);
    const auto x = uniform_grid(1.0, 11);
    const auto f = exact_fields(pipe, 0.15, 0.3, 0.0, x);
    CHECK(f.p[0] == 1.0);
    CHECK(f.phi[0] == doctest::Approx(0.2646).epsilon(2e-4));
    CHECK(f.phi[0] == doctest::Approx(std::sqrt(0.6 / 8.57)).epsilon(1e-14));

    const auto a = exact_fields(pipe, 0.0, 0.3, 0.0, x);
    const auto b = exact_fields(pipe, 0.0, 0.3, 3.0, x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(a.p[i] == b.p[i]);
        CHECK(a.p[i] == doctest::Approx(std::sqrt(1.0 - 0.6 * x[i])).epsilon(1e-10));
    }
    // growth rate in time
    const auto later = exact_fields(pipe, 0.15, 0.3, 2.0, x);
    CHECK(later.p[0] == doctest::Approx(std::exp(0.15 * 2.0 / std::sqrt(2.0 * 8.57))).epsilon(1e-14));
}

TEST_CASE("exact fields satisfy both balance laws pointwise") {
    const PipeModel pipe = PipeModel::dimensionless(8.57);
    const double lambda = 0.15, g0 = 0.3, t = 0.7;
    const auto x = uniform_grid(1.0, 1001);
    const double h = x[1] - x[0];
    const auto f = exact_fields(pipe, lambda, g0, t, x);
    const double dt = 1e-4;
    const auto fp = exact_fields(pipe, lambda, g0, t + dt, x);
    const auto fm = exact_fields(pipe, lambda, g0, t - dt, x);
    double worst_mass = 0.0, worst_momentum = 0.0;
    for (std::size_t i = 2; i + 2 < x.size(); ++i) {
        const double dpdt = (fp.p[i] - fm.p[i]) / (2 * dt);
        const double dphidx = (-f.phi[i + 2] + 8 * f.phi[i + 1] - 8 * f.phi[i - 1] + f.phi[i - 2]) / (12 * h);
        const double dpdx = (-f.p[i + 2] + 8 * f.p[i + 1] - 8 * f.p[i - 1] + f.p[i - 2]) / (12 * h);
        worst_mass = std::max(worst_mass, std::abs(dpdt + dphidx) / std::abs(dphidx));
        worst_momentum = std::max(worst_momentum,
                                  std::abs(dpdx + pipe.alpha * f.phi[i] * f.phi[i] / (2 * f.p[i])) / std::abs(dpdx));
    }
    CHECK(worst_mass < 1e-7);
    CHECK(worst_momentum < 1e-7);
}
