#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gaspipe/config.hpp"
#include "gaspipe/errors.hpp"
#include "gaspipe/scenario.hpp"

using namespace gaspipe;
namespace fs = std::filesystem;

namespace {

const char* kSmall = R"([grid]
nx = 41
dt = 0.01 [1]
t_end = 1 [1]
output_dt = 0.05 [1]
probes = 0.25, 0.5 [1]
snapshot_times = 0, 0.5 [1]
)";

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("gaspipe_test_" + name);
    fs::remove_all(dir);
    return dir;
}

TimeSeries series(std::vector<double> t, std::vector<double> p, std::vector<double> phi) {
    TimeSeries s;
    s.t = std::move(t);
    s.probes = {0.5};
    s.p = {std::move(p)};
    s.phi = {std::move(phi)};
    return s;
}

}  // namespace

TEST_CASE("error metrics") {
    const auto ref = series({0, 1, 2}, {1.0, -2.0, 0.5}, {0.3, 0.2, 0.1});
    const auto same = error_metrics(ref, ref);
    REQUIRE(same.size() == 1);
    CHECK(same[0].p.rel_l2 == 0.0);
    CHECK(same[0].phi.rel_linf == 0.0);

    const double e = 0.01;
    const auto scaled = series({0, 1, 2}, {1.0 + e, -2.0 * (1 + e), 0.5 * (1 + e)}, {0.3, 0.2, 0.1});
    const auto m = error_metrics(ref, scaled);
    CHECK(m[0].p.rel_linf == doctest::Approx(e));
    CHECK(m[0].p.rel_l2 == doctest::Approx(e));

    const auto offset = series({0, 1, 2}, {1.0, -2.0, 0.6}, {0.3, 0.2, 0.1});
    CHECK(error_metrics(ref, offset)[0].p.rel_linf == doctest::Approx(0.1 / 2.0));
    CHECK(error_metrics(ref, offset)[0].p.rel_l2 == doctest::Approx(0.1 / std::sqrt(1 + 4 + 0.25)));

    CHECK_THROWS_AS(error_metrics(ref, series({0, 1}, {1, 1}, {1, 1})), AlignmentError);
    CHECK_THROWS_AS(error_metrics(ref, series({0, 1, 3}, {1, 1, 1}, {1, 1, 1})), AlignmentError);
    auto moved = ref;
    moved.probes = {0.4};
    CHECK_THROWS_AS(error_metrics(ref, moved), AlignmentError);
}

TEST_CASE("output grid includes both ends") {
    const auto g = output_grid(0.3, 1.0);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    CHECK(g.size() == 5);
    CHECK(output_grid(0.25, 1.0).size() == 5);
}

TEST_CASE("probe series interpolate snapshots") {
    FieldSnapshot a;
    a.x = {0.0, 1.0};
    a.p = {1.0, 3.0};
    a.phi = {0.0, 2.0};
    const auto s = probe_series({a}, {0.25});
    CHECK(s.p[0][0] == doctest::Approx(1.5));
    CHECK(s.phi[0][0] == doctest::Approx(0.5));
}

TEST_CASE("small scenario writes tagged and deterministic outputs") {
    const auto config = parse_config(kSmall);
    const auto result = run_scenario(config);
    REQUIRE(result.all_completed());
    REQUIRE(result.runs.size() == 2);
    for (const auto& run : result.runs) {
        CHECK(run.line_pack_defect <= 1e-12);
        CHECK(run.reference_steps >= 100);
        CHECK(run.metrics.size() == 5 * 2 * 2);
        CHECK(run.get(Variant::Reference).fields.size() == 2);
        CHECK(run.get(Variant::UaCorrected).series.t.size() == 21);
        REQUIRE(run.metric(Variant::BaBase, "phi", 0.5) != nullptr);
    }

    const auto a = scratch("a");
    const auto b = scratch("b");
    write_results(config, result, a);
    write_results(config, run_scenario(config), b);
    const std::string tag = "config_hash=" + hash_hex(config.hash);
    for (const char* bc : {"pp", "pphi"}) {
        for (Variant v : kAllVariants) {
            const auto rel = fs::path(bc) / (std::string(to_string(v)) + ".csv");
            const auto text = slurp(a / rel);
            CHECK(text.find(tag) != std::string::npos);
            CHECK(text.find("status=completed") != std::string::npos);
            CHECK(text.find("t,x,p,phi") != std::string::npos);
            CHECK(text == slurp(b / rel));
            CHECK(fs::exists(a / bc / "fields" / (std::string(to_string(v)) + ".csv")));
        }
    }
    for (const char* f : {"metrics.csv", "manifest.csv", "config.resolved.ini"}) {
        CHECK(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
    CHECK(slurp(a / "metrics.csv").find("bc,variant,probe_x,variable,rel_l2,rel_linf") != std::string::npos);

    // the resolved config reloads to the same hash
    CHECK(load_config(a / "config.resolved.ini").hash == config.hash);
}

TEST_CASE("stationary frozen schedule makes every variant agree") {
    const auto config = parse_config(std::string(kSmall) + "[schedule]\nkind = frozen\nlambda0 = 0 [1]\n");
    const auto result = run_scenario(config);
    REQUIRE(result.all_completed());
    for (const auto& run : result.runs) {
        REQUIRE(run.metrics.size() == 20);
        for (const auto& m : run.metrics) CHECK(m.norms.rel_linf < 1e-3);
    }
}

TEST_CASE("growing frozen schedule: unbalanced variants agree, balanced ones do not") {
    const auto config = parse_config(std::string(kSmall) + "[schedule]\nkind = frozen\nlambda0 = 0.15 [1]\n",
                                     {parse_override("grid.nx=101"), parse_override("grid.dt=0.002 [1]")});
    const auto result = run_scenario(config);
    REQUIRE(result.all_completed());
    for (const auto& run : result.runs) {
        for (const auto& m : run.metrics) {
            const bool unbalanced = m.variant == Variant::UaBase || m.variant == Variant::UaCorrected ||
                                    m.variant == Variant::UaLinearized;
            if (unbalanced) {
                CHECK(m.norms.rel_linf < 1e-3);
                const auto* base = run.metric(Variant::UaBase, m.variable, m.probe);
                REQUIRE(base != nullptr);
                CHECK(std::abs(m.norms.rel_l2 - base->norms.rel_l2) < 1e-12);
            }
        }
        // the balanced base has a uniform flux, unlike the growing exact solution
        CHECK(run.metric(Variant::BaBase, "p", 0.5)->norms.rel_linf > 1e-3);
    }
}

TEST_CASE("unbalanced correction beats balanced correction in the flux") {
    const auto result = run_scenario(parse_config(kSmall, {parse_override("grid.t_end=2 [1]")}));
    for (const auto& run : result.runs) {
        for (double probe : {0.25, 0.5}) {
            const auto* ua = run.metric(Variant::UaCorrected, "phi", probe);
            const auto* ba = run.metric(Variant::BaCorrected, "phi", probe);
            REQUIRE(ua != nullptr);
            REQUIRE(ba != nullptr);
            CHECK(ua->norms.rel_l2 < ba->norms.rel_l2);
        }
    }
}

TEST_CASE("a failing variant is reported without stopping the others") {
    const auto config = parse_config(kSmall, {parse_override("solver.max_newton=1"),
                                              parse_override("solver.max_halvings=0"),
                                              parse_override("solver.newton_tol=1e-300 [1]"),
                                              parse_override("bc.kind=pp")});
    const auto result = run_scenario(config);
    CHECK_FALSE(result.all_completed());
    const auto& run = result.get(BcKind::PP);
    CHECK_FALSE(run.get(Variant::Reference).completed);
    CHECK(run.get(Variant::Reference).error.find("reference: ") == 0);
    CHECK(run.get(Variant::UaCorrected).completed);
    CHECK(run.get(Variant::BaBase).completed);
    CHECK(run.metrics.empty());

    const auto dir = scratch("failure");
    write_results(config, result, dir);
    const auto manifest = slurp(dir / "manifest.csv");
    CHECK(manifest.find("pp,reference,failed") != std::string::npos);
    CHECK(manifest.find("pp,ua_corrected,completed") != std::string::npos);
    CHECK(slurp(dir / "pp" / "reference.csv").find("status=failed") != std::string::npos);
}

TEST_CASE("convergence study on nested grids") {
    const auto config = parse_config(kSmall, {parse_override("convergence.grids=21,41,81"),
                                              parse_override("grid.dt=0.04 [1]"), parse_override("bc.kind=pp")});
    const auto studies = convergence_study(config);
    REQUIRE(studies.size() == 1);
    CHECK(studies[0].levels.size() == 3);
    CHECK(studies[0].observed_order > 1.7);
    CHECK(studies[0].observed_order < 2.3);
    CHECK(studies[0].levels[0].error_l2 > studies[0].levels[2].error_l2);
    CHECK(studies[0].levels[1].dt == doctest::Approx(0.01));

    CHECK_THROWS_AS(convergence_study(parse_config(kSmall, {parse_override("convergence.grids=21,41,61")})),
                    ConfigError);
    CHECK_THROWS_AS(convergence_study(parse_config(kSmall, {parse_override("convergence.grids=21,41")})),
                    ConfigError);
}

TEST_CASE("shipped configs parse") {
    const char* env = std::getenv("GASPIPE_CONFIG_DIR");
    const fs::path dir(env ? env : GASPIPE_CONFIG_DIR);
    const auto d = load_config(dir / "default.ini");
    CHECK(d.snapshot_times.size() == 4);
    CHECK(d.hash == parse_config("[grid]\nsnapshot_times = 0, 1, 2.5, 5 [1]\n").hash);
    const auto dim = scale(load_config(dir / "dimensional.ini"));
    CHECK(dim.units.alpha_dimless == doctest::Approx(8.57).epsilon(1e-3));
    CHECK(dim.schedule.lambda(0.0) == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(load_config(dir / "frozen.ini").schedule == ScheduleKind::Frozen);
}
