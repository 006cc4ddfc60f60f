#include "doctest.h"

#include <cmath>
#include <vector>

#include "gaspipe/adiabatic_ua.hpp"
#include "gaspipe/calibration.hpp"
#include "gaspipe/errors.hpp"
#include "oracles.hpp"

using namespace gaspipe;

namespace {

const PipeModel kPipe = PipeModel::dimensionless(8.57);

std::vector<double> time_grid(double t_end, std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = t_end * static_cast<double>(i) / static_cast<double>(n - 1);
    return t;
}

void round_trip(const ParameterSchedule& s, BcKind kind, const std::vector<double>& t, double tol) {
    const auto bc = ua_boundary(kPipe, s, kind);
    const auto r = calibrate(kPipe, bc, t);
    REQUIRE(r.t.size() == t.size());
    double scale = 0.0;
    for (double v : t) scale = std::max(scale, std::abs(s.lambda(v)));
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(std::abs(r.lambda[i] - s.lambda(t[i])) <= tol * scale);
        CHECK(oracle::rel_diff(r.g0[i], s.g0(t[i])) <= tol);
        CHECK(std::abs(r.lambda_cumulative[i] - s.lambda_cumulative(t[i])) <= tol * scale * (1.0 + t[i]));
    }
    // the interpolating schedule reproduces the samples and the ODE profile
    const double mid = 0.5 * (t[t.size() / 2] + t[t.size() / 2 + 1]);
    CHECK(std::abs(r.schedule.lambda(mid) - s.lambda(mid)) <= 1e-5 * scale);
    CHECK(oracle::rel_diff(r.schedule.g0(mid), s.g0(mid)) <= 1e-5);
}

}  // namespace

TEST_CASE("round trip from base-generated pressure series") {
    round_trip(modulated_schedule(0.05, 2.0, 0.3), BcKind::PP, time_grid(5.0, 501), 1e-6);
}

TEST_CASE("round trip from base-generated flux series") {
    round_trip(modulated_schedule(0.05, 2.0, 0.3), BcKind::PPHI, time_grid(5.0, 501), 1e-6);
}

TEST_CASE("round trip with a time-varying G0") {
    ParameterSchedule s = modulated_schedule(0.04, 3.0, 0.3);
    s.g0 = [](double t) { return 0.3 + 0.02 * std::sin(t); };
    s.g0_dot = [](double t) { return 0.02 * std::cos(t); };
    s.frozen = false;
    round_trip(s, BcKind::PP, time_grid(4.0, 401), 1e-6);
    round_trip(s, BcKind::PPHI, time_grid(4.0, 401), 1e-6);
}

TEST_CASE("constant inlet pressure gives zero lambda") {
    BoundarySpec bc;
    bc.kind = BcKind::PP;
    bc.left = [](double) { return 1.0; };
    bc.right = [](double) { return std::sqrt(1.0 - 0.6); };
    const auto r = calibrate(kPipe, bc, time_grid(2.0, 41));
    for (std::size_t i = 0; i < r.t.size(); ++i) {
        CHECK(std::abs(r.lambda[i]) < 1e-12);
        // stationary closed form: p_L / p_0 = sqrt(1 - 2 G0 L)
        CHECK(r.g0[i] == doctest::Approx(0.3).epsilon(1e-9));
    }
}

TEST_CASE("stationary inversion for other drops") {
    for (double g0 : {0.05, 0.2, 0.45}) {
        BoundarySpec bc;
        bc.kind = BcKind::PP;
        bc.left = [](double) { return 1.0; };
        bc.right = [g0](double) { return std::sqrt(1.0 - 2.0 * g0); };
        const auto r = calibrate(kPipe, bc, time_grid(1.0, 21));
        CHECK(r.g0.back() == doctest::Approx(g0).epsilon(1e-9));
    }
}

TEST_CASE("calibration errors") {
    BoundarySpec bc;
    bc.kind = BcKind::PP;
    bc.left = [](double) { return 1.0; };
    // outlet above inlet: no forward-flow profile matches
    bc.right = [](double) { return 1.2; };
    try {
        calibrate(kPipe, bc, time_grid(1.0, 21));
        FAIL("expected a calibration error");
    } catch (const CalibrationError& e) {
        CHECK(std::string(e.what()).find("searched") != std::string::npos);
    }
    BoundarySpec shifted = bc;
    shifted.left = [](double) { return 1.3; };
    shifted.right = [](double) { return 1.0; };
    CHECK_THROWS_AS(calibrate(kPipe, shifted, time_grid(1.0, 21)), CalibrationError);
}
