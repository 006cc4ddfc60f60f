#include "doctest.h"

#include <cmath>
#include <string>

#include "gaspipe/config.hpp"
#include "gaspipe/errors.hpp"

using namespace gaspipe;

namespace {

const char* kDimensional = R"(mode = dimensional
[pipe]
length = 100 [km]
alpha = 900 [m/s^2]
sound_speed = 300 [m/s]
ref_pressure = 50 [bar]
time_unit = 1 [h]
[grid]
dt = 3.6 [s]
probes = 25, 50 [km]
)";

}  // namespace

TEST_CASE("defaults are the reference scenario") {
    const auto c = default_config();
    CHECK_FALSE(c.dimensional);
    CHECK(c.pipe.alpha == 8.57);
    CHECK(c.pipe.length == 1.0);
    CHECK(c.lambda0 == 0.05);
    CHECK(c.tau == 2.0);
    CHECK(c.g0 == 0.3);
    CHECK(c.nx == 201);
    CHECK(c.dt == 1e-3);
    CHECK(c.t_end == 5.0);
    CHECK(c.probes == std::vector<double>{0.5});
    CHECK(c.bc_kinds.size() == 2);
    CHECK(c.schedule == ScheduleKind::Modulated);
}

TEST_CASE("units are converted to SI") {
    const auto c = parse_config(kDimensional);
    CHECK(c.dimensional);
    CHECK(c.pipe.length == 1e5);
    CHECK(c.pipe.ref_pressure == 5e6);
    CHECK(c.time_unit == 3600.0);
    CHECK(c.dt == doctest::Approx(3.6));
    REQUIRE(c.probes.size() == 2);
    CHECK(c.probes[0] == 25e3);
    CHECK(c.probes[1] == 50e3);
    // unset scenario keys follow the pipe
    CHECK(c.tau == doctest::Approx(7200.0));
    CHECK(c.g0 == doctest::Approx(3e-6));
    CHECK(c.lambda0 == doctest::Approx(0.05 * std::pow(1e5, -1.5)));
    CHECK(c.t_end == doctest::Approx(5 * 3600.0));

    const auto km = parse_config(std::string(kDimensional) + "[schedule]\ng0 = 0.003 [1/km]\n");
    CHECK(km.g0 == doctest::Approx(3e-6));
}

TEST_CASE("scaling a dimensional config recovers the scaled scenario") {
    const auto s = scale(parse_config(kDimensional));
    CHECK(s.pipe.length == 1.0);
    CHECK(s.units.alpha_dimless == doctest::Approx(900.0 * 1e15 / (std::pow(300.0, 4) * 3600.0 * 3600.0)));
    CHECK(s.dt == doctest::Approx(1e-3));
    CHECK(s.t_end == doctest::Approx(5.0));
    CHECK(s.probes[1] == doctest::Approx(0.5));
    CHECK(s.schedule.lambda(0.0) == doctest::Approx(0.15));
    CHECK(s.schedule.g0(1.0) == doctest::Approx(0.3));
    CHECK(s.linearized_dt == doctest::Approx(1e-3));

    const auto d = scale(default_config());
    CHECK(d.pipe.alpha == 8.57);
    CHECK(d.schedule.lambda(2.0) == doctest::Approx(-0.15));
}

TEST_CASE("invalid configs are rejected") {
    CHECK_THROWS_AS(parse_config("[pipe]\nalpha = 8.57\n"), ConfigError);            // no unit
    CHECK_THROWS_AS(parse_config("[pipe]\nalpha = 8.57 [m/s^2]\n"), ConfigError);    // dimensional unit
    CHECK_THROWS_AS(parse_config("[pipe]\nlength = 2 [1]\n"), ConfigError);          // scaled length
    CHECK_THROWS_AS(parse_config("[pipe]\nbogus = 1 [1]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\nnx = 20.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\nnx = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\nnx = 40 [m]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\ndt = -1 [1]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\ndt = fast [1]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\ndt = 1, 2 [1]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\nprobes = 1.5 [1]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[bc]\nkind = open\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("mode = metric\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[schedule]\nkind = random\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[schedule]\ng0 = 0 [1]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[pipe\nalpha = 1 [1]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[solver]\nscheme = rk4\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(kDimensional) + "[schedule]\ntau = 2 [furlong]\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), ConfigError);
    try {
        parse_config(std::string(kDimensional) + "[schedule]\ntau = 2 [furlong]\n");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("schedule.tau") != std::string::npos);
        CHECK(msg.find("min") != std::string::npos);
    }
}

TEST_CASE("overrides") {
    const auto o = parse_override("grid.nx = 51");
    CHECK(o.key == "grid.nx");
    CHECK(o.value == "51");
    CHECK_THROWS_AS(parse_override("grid.nx"), ConfigError);
    CHECK_THROWS_AS(parse_override("=3"), ConfigError);

    const auto c = parse_config("[grid]\nnx = 101\n", {parse_override("grid.nx=51"), parse_override("bc.kind=pphi")});
    CHECK(c.nx == 51);
    REQUIRE(c.bc_kinds.size() == 1);
    CHECK(c.bc_kinds[0] == BcKind::PPHI);
}

TEST_CASE("hash is stable and tracks content") {
    const auto a = default_config();
    const auto b = parse_config("# comment only\n\n[grid]\nnx = 201\n");
    CHECK(a.hash == b.hash);  // explicit defaults resolve identically
    CHECK(a.hash == fnv1a64([&] {
              std::string s;
              for (const auto& [k, v] : a.canonical)
                  if (k != "output.dir") s += k + "=" + v + "\n";
              return s;
          }()));
    CHECK(parse_config("[output]\ndir = elsewhere\n").hash == a.hash);
    CHECK(parse_config("[grid]\nnx = 202\n").hash != a.hash);
    CHECK(parse_config("[pipe]\nalpha = 8.5700001 [1]\n").hash != a.hash);
    CHECK(hash_hex(0x1234) == "0000000000001234");
    // FNV-1a 64 reference values
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);

    // canonical list is sorted and covers every key
    for (std::size_t i = 1; i < a.canonical.size(); ++i) CHECK(a.canonical[i - 1].first < a.canonical[i].first);
    CHECK(a.canonical.size() == 29);
}

TEST_CASE("boolean and list parsing") {
    const auto c = parse_config("[output]\ndimensionless = yes\n[grid]\nsnapshot_times = 0 1,2.5   5 [1]\n");
    CHECK(c.dimensionless_output);
    CHECK(c.snapshot_times == std::vector<double>{0.0, 1.0, 2.5, 5.0});
    CHECK_THROWS_AS(parse_config("[output]\ndimensionless = maybe\n"), ConfigError);
    const auto g = parse_config("[convergence]\ngrids = 51, 101 [1]\n");
    CHECK(g.convergence_grids == std::vector<std::size_t>{51, 101});
}
