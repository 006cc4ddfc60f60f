// gaspipe command-line driver: run, convergence, calibrate, validate.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gaspipe/adiabatic_ua.hpp"
#include "gaspipe/calibration.hpp"
#include "gaspipe/config.hpp"
#include "gaspipe/errors.hpp"
#include "gaspipe/numerics.hpp"
#include "gaspipe/scenario.hpp"
#include "gaspipe/validation.hpp"

namespace {

struct CommonArgs {
    std::string config;
    std::vector<std::string> overrides;
    bool dimensionless = false;
    std::string out;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config, "scenario config (INI); defaults apply when omitted");
    cmd->add_option("--set", args.overrides, "override a config key, e.g. --set grid.nx=401")
        ->type_name("KEY=VALUE");
    cmd->add_flag("--dimensionless", args.dimensionless, "write outputs in scaled units");
    cmd->add_option("--out", args.out, "results directory (overrides output.dir)");
}

gaspipe::ScenarioConfig resolve(const CommonArgs& args) {
    std::vector<gaspipe::ConfigOverride> overrides;
    for (const auto& o : args.overrides) overrides.push_back(gaspipe::parse_override(o));
    if (!args.out.empty()) overrides.push_back({"output.dir", args.out});
    if (args.dimensionless) overrides.push_back({"output.dimensionless", "true"});
    return args.config.empty() ? gaspipe::parse_config("", overrides)
                               : gaspipe::load_config(args.config, overrides);
}

int cmd_run(const CommonArgs& args) {
    const auto config = resolve(args);
    const auto result = gaspipe::run_scenario(config);
    gaspipe::write_results(config, result, config.results_dir);
    std::cout << "config_hash " << gaspipe::hash_hex(config.hash) << "\n";
    for (const auto& run : result.runs) {
        for (const auto& v : run.variants) {
            std::cout << gaspipe::to_string(run.kind) << " " << gaspipe::to_string(v.variant) << " "
                      << (v.completed ? "completed" : "FAILED " + v.error) << "\n";
        }
        for (const auto& m : run.metrics) {
            std::cout << "  " << gaspipe::to_string(m.variant) << " " << m.variable
                      << " rel_l2=" << m.norms.rel_l2 << " rel_linf=" << m.norms.rel_linf << "\n";
        }
    }
    std::cout << "results in " << config.results_dir.string() << "\n";
    return result.all_completed() ? 0 : 1;
}

int cmd_convergence(const CommonArgs& args) {
    const auto config = resolve(args);
    const auto studies = gaspipe::convergence_study(config);
    gaspipe::write_convergence(config, studies, config.results_dir);
    for (const auto& s : studies) {
        std::cout << gaspipe::to_string(s.kind) << " observed order " << s.observed_order << "\n";
        for (const auto& l : s.levels) {
            std::cout << "  nx=" << l.nx << " dt=" << l.dt << " rel_l2=" << l.error_l2 << "\n";
        }
    }
    return 0;
}

struct Samples {
    std::vector<double> t, left, right;
};

Samples read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw gaspipe::ConfigError("cannot read boundary series '" + path + "'");
    Samples s;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 't') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double t, l, r;
        if (!(row >> t >> l >> r)) throw gaspipe::ConfigError("bad row in '" + path + "': " + line);
        s.t.push_back(t);
        s.left.push_back(l);
        s.right.push_back(r);
    }
    if (s.t.size() < 8) throw gaspipe::ConfigError("boundary series needs at least 8 samples");
    return s;
}

int cmd_calibrate(const CommonArgs& args, const std::string& input, const std::string& bc_text) {
    const auto config = resolve(args);
    const auto scaled = gaspipe::scale(config);
    const auto& u = scaled.units;
    const auto kind = gaspipe::parse_bc_kind(bc_text);
    const double right_unit = kind == gaspipe::BcKind::PP ? u.pressure_unit : u.flux_unit;

    gaspipe::BoundarySpec bc;
    std::vector<double> times;
    if (input.empty()) {
        bc = gaspipe::ua_boundary(scaled.pipe, scaled.schedule, kind);
        times = gaspipe::output_grid(scaled.output_dt, scaled.t_end);
    } else {
        auto s = read_series(input);
        for (auto& v : s.t) v /= u.time_unit;
        for (auto& v : s.left) v /= u.pressure_unit;
        for (auto& v : s.right) v /= right_unit;
        times = s.t;
        bc.kind = kind;
        bc.left = [t = s.t, y = s.left](double at) { return gaspipe::numerics::interpolate_linear(t, y, at); };
        bc.right = [t = s.t, y = s.right](double at) { return gaspipe::numerics::interpolate_linear(t, y, at); };
    }
    const auto result = gaspipe::calibrate(scaled.pipe, bc, times);

    const auto path = config.results_dir / ("calibration_" + std::string(gaspipe::to_string(kind)) + ".csv");
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    out << std::setprecision(17);
    const bool si = config.dimensional && !config.dimensionless_output;
    const double lu = si ? u.lambda_unit() : 1.0;
    const double gu = si ? u.g_unit() : 1.0;
    const double tu = si ? u.time_unit : 1.0;
    out << "# gaspipe calibrated schedule\n# config_hash=" << gaspipe::hash_hex(config.hash) << "\n";
    out << "# units: " << (si ? "t [s], lambda [1/m^1.5], g0 [1/m], rates per s" : "all [1]") << "\n";
    out << "t,lambda,g0,lambda_dot,g0_dot\n";
    double lambda_err = 0.0, g0_err = 0.0, lambda_scale = 0.0;
    for (std::size_t i = 0; i < result.t.size(); ++i) {
        out << result.t[i] * tu << "," << result.lambda[i] * lu << "," << result.g0[i] * gu << ","
            << result.lambda_dot[i] * lu / tu << "," << result.g0_dot[i] * gu / tu << "\n";
        if (input.empty()) {
            lambda_scale = std::max(lambda_scale, std::abs(scaled.schedule.lambda(result.t[i])));
        }
    }
    if (input.empty()) {
        for (std::size_t i = 0; i < result.t.size(); ++i) {
            lambda_err = std::max(lambda_err, std::abs(result.lambda[i] - scaled.schedule.lambda(result.t[i])));
            const double g0 = scaled.schedule.g0(result.t[i]);
            g0_err = std::max(g0_err, std::abs(result.g0[i] - g0) / g0);
        }
        std::cout << "round trip: max lambda error / max|lambda| = " << lambda_err / lambda_scale
                  << ", max relative G0 error = " << g0_err << "\n";
    }
    std::cout << "schedule written to " << path.string() << "\n";
    return 0;
}

int cmd_validate(const CommonArgs& args) {
    const auto config = resolve(args);
    bool ok = true;
    for (const auto& c : gaspipe::validate_scenario(config)) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " value=" << c.value
                  << " threshold=" << c.threshold << "\n";
        ok = ok && c.passed;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gaspipe: single-pipe gas transients, adiabatic reduced models and reference solver"};
    app.require_subcommand(1);

    CommonArgs run_args, conv_args, cal_args, val_args;
    auto* run = app.add_subcommand("run", "run every solver variant and write CSV results");
    add_common(run, run_args);
    auto* conv = app.add_subcommand("convergence", "reference-solver grid refinement study");
    add_common(conv, conv_args);
    auto* cal = app.add_subcommand("calibrate", "recover (lambda, G0) from boundary series");
    add_common(cal, cal_args);
    std::string input, bc_text = "pp";
    cal->add_option("--input", input, "CSV with columns t,left,right; generated from the schedule if omitted");
    cal->add_option("--bc", bc_text, "boundary kind of the series")->check(CLI::IsMember({"pp", "pphi"}));
    auto* val = app.add_subcommand("validate", "invariant suite on the configured scenario");
    add_common(val, val_args);

    CLI11_PARSE(app, argc, argv);
    std::cout << std::setprecision(6);
    try {
        if (run->parsed()) return cmd_run(run_args);
        if (conv->parsed()) return cmd_convergence(conv_args);
        if (cal->parsed()) return cmd_calibrate(cal_args, input, bc_text);
        if (val->parsed()) return cmd_validate(val_args);
    } catch (const gaspipe::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
