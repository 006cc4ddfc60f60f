#include "gaspipe/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gaspipe/errors.hpp"

namespace gaspipe {
namespace {

namespace pt = boost::property_tree;

enum class Dim { Text, Count, Ratio, Length, Pressure, Time, Accel, Velocity, Lambda, G };

struct KeySpec {
    Dim dim;
    bool list = false;
};

const std::map<std::string, KeySpec>& key_table() {
    static const std::map<std::string, KeySpec> table{
        {"mode", {Dim::Text}},
        {"output.dir", {Dim::Text}},
        {"output.dimensionless", {Dim::Text}},
        {"pipe.length", {Dim::Length}},
        {"pipe.alpha", {Dim::Accel}},
        {"pipe.sound_speed", {Dim::Velocity}},
        {"pipe.ref_pressure", {Dim::Pressure}},
        {"pipe.time_unit", {Dim::Time}},
        {"schedule.kind", {Dim::Text}},
        {"schedule.lambda0", {Dim::Lambda}},
        {"schedule.tau", {Dim::Time}},
        {"schedule.g0", {Dim::G}},
        {"schedule.stretch", {Dim::Ratio}},
        {"bc.kind", {Dim::Text}},
        {"grid.nx", {Dim::Count}},
        {"grid.dt", {Dim::Time}},
        {"grid.t_end", {Dim::Time}},
        {"grid.output_dt", {Dim::Time}},
        {"grid.linearized_dt", {Dim::Time}},
        {"grid.probes", {Dim::Length, true}},
        {"grid.snapshot_times", {Dim::Time, true}},
        {"solver.scheme", {Dim::Text}},
        {"solver.epsilon", {Dim::Ratio}},
        {"solver.newton_tol", {Dim::Ratio}},
        {"solver.max_newton", {Dim::Count}},
        {"solver.max_halvings", {Dim::Count}},
        {"solver.profile_rel_tol", {Dim::Ratio}},
        {"solver.profile_abs_tol", {Dim::Ratio}},
        {"convergence.grids", {Dim::Count, true}},
    };
    return table;
}

const std::map<std::string, double>& unit_factors(Dim dim) {
    static const std::map<Dim, std::map<std::string, double>> units{
        {Dim::Length, {{"m", 1.0}, {"km", 1e3}}},
        {Dim::Pressure, {{"Pa", 1.0}, {"kPa", 1e3}, {"MPa", 1e6}, {"bar", 1e5}}},
        {Dim::Time, {{"s", 1.0}, {"min", 60.0}, {"h", 3600.0}}},
        {Dim::Accel, {{"m/s^2", 1.0}}},
        {Dim::Velocity, {{"m/s", 1.0}, {"km/s", 1e3}}},
        {Dim::Lambda, {{"1/m^1.5", 1.0}, {"1/km^1.5", std::pow(1e3, -1.5)}}},
        {Dim::G, {{"1/m", 1.0}, {"1/km", 1e-3}}},
    };
    static const std::map<std::string, double> none;
    const auto it = units.find(dim);
    return it == units.end() ? none : it->second;
}

std::string si_unit(Dim dim) {
    switch (dim) {
        case Dim::Length: return "m";
        case Dim::Pressure: return "Pa";
        case Dim::Time: return "s";
        case Dim::Accel: return "m/s^2";
        case Dim::Velocity: return "m/s";
        case Dim::Lambda: return "1/m^1.5";
        case Dim::G: return "1/m";
        default: return "1";
    }
}

bool physical(Dim dim) {
    return dim != Dim::Text && dim != Dim::Count && dim != Dim::Ratio;
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n\"");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n\"");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& key, const std::string& token) {
    double value = 0.0;
    const auto* begin = token.data();
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ConfigError(key + ": '" + token + "' is not a number");
    }
    return value;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string token;
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!token.empty()) out.push_back(token);
            token.clear();
        } else {
            token.push_back(c);
        }
    }
    if (!token.empty()) out.push_back(token);
    return out;
}

// Numeric values of one entry, converted to the canonical units of `mode`.
std::vector<double> parse_numeric(const std::string& key, const KeySpec& spec,
                                  const std::string& raw, bool dimensional) {
    static const std::regex with_unit(R"(^(.*?)\s*\[([^\]]*)\]\s*$)");
    std::smatch m;
    std::string numbers = raw;
    std::optional<std::string> unit;
    if (std::regex_match(raw, m, with_unit)) {
        numbers = m[1].str();
        unit = trim(m[2].str());
    }
    double factor = 1.0;
    if (spec.dim == Dim::Count) {
        if (unit && *unit != "1") throw ConfigError(key + ": counts take no unit");
    } else if (!unit) {
        throw ConfigError(key + ": missing unit annotation, e.g. '" + raw + " [" +
                          (dimensional ? si_unit(spec.dim) : std::string("1")) + "]'");
    } else if (!physical(spec.dim) || !dimensional) {
        if (*unit != "1") {
            throw ConfigError(key + ": expected unit [1]" +
                              std::string(dimensional ? "" : " in dimensionless mode") + ", got [" +
                              *unit + "]");
        }
    } else {
        const auto& table = unit_factors(spec.dim);
        const auto it = table.find(*unit);
        if (it == table.end()) {
            std::string allowed;
            for (const auto& [name, _] : table) allowed += " " + name;
            throw ConfigError(key + ": unit [" + *unit + "] not accepted; use one of" + allowed);
        }
        factor = it->second;
    }
    const auto tokens = split_list(numbers);
    if (tokens.empty()) {
        if (spec.list) return {};
        throw ConfigError(key + ": no value");
    }
    if (!spec.list && tokens.size() != 1) throw ConfigError(key + ": expected a single value");
    std::vector<double> values;
    for (const auto& token : tokens) {
        const double v = parse_number(key, token) * factor;
        if (spec.dim == Dim::Count && (v < 0.0 || v != std::floor(v))) {
            throw ConfigError(key + ": expected a non-negative integer");
        }
        values.push_back(v);
    }
    return values;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void flatten(const pt::ptree& tree, std::map<std::string, std::string>& out) {
    for (const auto& [name, child] : tree) {
        if (child.empty()) {
            out[name] = trim(child.data());
            continue;
        }
        for (const auto& [key, leaf] : child) {
            if (!leaf.empty()) throw ConfigError("nested section under '" + name + "'");
            out[name + "." + key] = trim(leaf.data());
        }
    }
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "yes" || text == "1" || text == "on") return true;
    if (text == "false" || text == "no" || text == "0" || text == "off") return false;
    throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

}  // namespace

ConfigOverride parse_override(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override '" + text + "' is not of the form section.key=value");
    }
    return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t hash) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

ScenarioConfig parse_config(const std::string& text, const std::vector<ConfigOverride>& overrides) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    std::map<std::string, std::string> raw;
    flatten(tree, raw);
    for (const auto& o : overrides) raw[o.key] = o.value;

    const auto& table = key_table();
    for (const auto& [key, _] : raw) {
        if (!table.contains(key)) throw ConfigError("unknown config key '" + key + "'");
    }

    ScenarioConfig cfg;
    const auto mode = raw.contains("mode") ? raw.at("mode") : std::string("dimensionless");
    if (mode != "dimensionless" && mode != "dimensional") {
        throw ConfigError("mode must be 'dimensional' or 'dimensionless', got '" + mode + "'");
    }
    cfg.dimensional = mode == "dimensional";

    auto scalar = [&](const std::string& key, double fallback) {
        const auto it = raw.find(key);
        if (it == raw.end()) return fallback;
        return parse_numeric(key, table.at(key), it->second, cfg.dimensional).front();
    };
    auto list = [&](const std::string& key, std::vector<double> fallback) {
        const auto it = raw.find(key);
        if (it == raw.end()) return fallback;
        return parse_numeric(key, table.at(key), it->second, cfg.dimensional);
    };
    auto text_value = [&](const std::string& key, std::string fallback) {
        const auto it = raw.find(key);
        return it == raw.end() ? fallback : it->second;
    };

    // Defaults reproduce the reference scenario; in dimensional mode they are
    // the same scenario expressed through the configured pipe.
    if (cfg.dimensional) {
        cfg.pipe = {scalar("pipe.length", 1e5), scalar("pipe.alpha", 900.0),
                    scalar("pipe.sound_speed", 300.0), scalar("pipe.ref_pressure", 5e6)};
        cfg.time_unit = scalar("pipe.time_unit", 3600.0);
    } else {
        for (const char* key : {"pipe.length", "pipe.sound_speed", "pipe.ref_pressure", "pipe.time_unit"}) {
            if (scalar(key, 1.0) != 1.0) {
                throw ConfigError(std::string(key) + " must be 1 in dimensionless mode");
            }
        }
        cfg.pipe = PipeModel::dimensionless(scalar("pipe.alpha", 8.57));
        cfg.time_unit = 1.0;
    }
    try {
        cfg.pipe.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError(e.what());
    }
    const double T = cfg.time_unit;
    const double L = cfg.pipe.length;
    if (!(T > 0.0)) throw ConfigError("pipe.time_unit must be positive");

    const auto kind = text_value("schedule.kind", "modulated");
    if (kind == "modulated") {
        cfg.schedule = ScheduleKind::Modulated;
    } else if (kind == "frozen") {
        cfg.schedule = ScheduleKind::Frozen;
    } else {
        throw ConfigError("schedule.kind must be 'modulated' or 'frozen', got '" + kind + "'");
    }
    cfg.lambda0 = scalar("schedule.lambda0", 0.05 * std::pow(L, -1.5));
    cfg.tau = scalar("schedule.tau", 2.0 * T);
    cfg.g0 = scalar("schedule.g0", 0.3 / L);
    cfg.stretch = scalar("schedule.stretch", 1.0);
    if (!(cfg.tau > 0.0) || !(cfg.g0 > 0.0) || !(cfg.stretch > 0.0)) {
        throw ConfigError("schedule.tau, schedule.g0 and schedule.stretch must be positive");
    }

    const auto bc = text_value("bc.kind", "both");
    if (bc == "both") {
        cfg.bc_kinds = {BcKind::PP, BcKind::PPHI};
    } else {
        try {
            cfg.bc_kinds = {parse_bc_kind(bc)};
        } catch (const InvalidParameter&) {
            throw ConfigError("bc.kind must be 'pp', 'pphi' or 'both', got '" + bc + "'");
        }
    }

    cfg.nx = static_cast<std::size_t>(scalar("grid.nx", static_cast<double>(kDefaultGridPoints)));
    cfg.dt = scalar("grid.dt", 1e-3 * T);
    cfg.t_end = scalar("grid.t_end", 5.0 * T);
    cfg.output_dt = scalar("grid.output_dt", 0.01 * T);
    cfg.linearized_dt = scalar("grid.linearized_dt", 0.0);
    cfg.probes = list("grid.probes", {0.5 * L});
    cfg.snapshot_times = list("grid.snapshot_times", {});
    if (cfg.nx < 5) throw ConfigError("grid.nx must be at least 5");
    if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0) || !(cfg.output_dt > 0.0) || cfg.linearized_dt < 0.0) {
        throw ConfigError("grid.dt, grid.t_end and grid.output_dt must be positive");
    }
    for (double x : cfg.probes) {
        if (x < 0.0 || x > L) throw ConfigError("grid.probes must lie inside the pipe");
    }
    for (double t : cfg.snapshot_times) {
        if (t < 0.0 || t > cfg.t_end) throw ConfigError("grid.snapshot_times must lie in [0, t_end]");
    }

    const auto scheme = text_value("solver.scheme", "implicit");
    if (scheme == "implicit") {
        cfg.reference.scheme = TimeScheme::Implicit;
    } else if (scheme == "explicit") {
        cfg.reference.scheme = TimeScheme::Explicit;
    } else {
        throw ConfigError("solver.scheme must be 'implicit' or 'explicit'");
    }
    cfg.reference.epsilon = scalar("solver.epsilon", cfg.reference.epsilon);
    cfg.reference.newton_tol = scalar("solver.newton_tol", cfg.reference.newton_tol);
    cfg.reference.max_newton = static_cast<int>(scalar("solver.max_newton", cfg.reference.max_newton));
    cfg.reference.max_halvings =
        static_cast<int>(scalar("solver.max_halvings", cfg.reference.max_halvings));
    cfg.profile.rel_tol = scalar("solver.profile_rel_tol", cfg.profile.rel_tol);
    cfg.profile.abs_tol = scalar("solver.profile_abs_tol", cfg.profile.abs_tol);
    if (!(cfg.reference.epsilon > 0.0) || !(cfg.reference.newton_tol > 0.0) ||
        !(cfg.profile.rel_tol > 0.0) || !(cfg.profile.abs_tol > 0.0) || cfg.reference.max_newton < 1) {
        throw ConfigError("solver tolerances must be positive");
    }

    cfg.convergence_grids.clear();
    for (double n : list("convergence.grids", {201, 401, 801})) {
        if (n < 5) throw ConfigError("convergence.grids entries must be at least 5");
        cfg.convergence_grids.push_back(static_cast<std::size_t>(n));
    }
    cfg.results_dir = text_value("output.dir", "results");
    cfg.dimensionless_output = parse_bool("output.dimensionless", text_value("output.dimensionless", "false"));

    // Canonical form: every key, resolved, in canonical units.
    auto unit_of = [&](Dim d) { return cfg.dimensional ? si_unit(d) : std::string("1"); };
    auto put = [&](const std::string& key, const std::vector<double>& values) {
        std::string s;
        for (std::size_t i = 0; i < values.size(); ++i) {
            s += (i ? "," : "") + format_number(values[i]);
        }
        const auto& spec = table.at(key);
        if (spec.dim != Dim::Count) s += " [" + unit_of(spec.dim) + "]";
        cfg.canonical.emplace_back(key, s);
    };
    cfg.canonical.emplace_back("mode", mode);
    cfg.canonical.emplace_back("output.dir", cfg.results_dir.string());
    cfg.canonical.emplace_back("output.dimensionless", cfg.dimensionless_output ? "true" : "false");
    put("pipe.length", {cfg.pipe.length});
    put("pipe.alpha", {cfg.pipe.alpha});
    put("pipe.sound_speed", {cfg.pipe.sound_speed});
    put("pipe.ref_pressure", {cfg.pipe.ref_pressure});
    put("pipe.time_unit", {cfg.time_unit});
    cfg.canonical.emplace_back("schedule.kind", kind);
    put("schedule.lambda0", {cfg.lambda0});
    put("schedule.tau", {cfg.tau});
    put("schedule.g0", {cfg.g0});
    put("schedule.stretch", {cfg.stretch});
    cfg.canonical.emplace_back("bc.kind", bc);
    put("grid.nx", {static_cast<double>(cfg.nx)});
    put("grid.dt", {cfg.dt});
    put("grid.t_end", {cfg.t_end});
    put("grid.output_dt", {cfg.output_dt});
    put("grid.linearized_dt", {cfg.linearized_dt});
    put("grid.probes", cfg.probes);
    put("grid.snapshot_times", cfg.snapshot_times);
    cfg.canonical.emplace_back("solver.scheme", scheme);
    put("solver.epsilon", {cfg.reference.epsilon});
    put("solver.newton_tol", {cfg.reference.newton_tol});
    put("solver.max_newton", {static_cast<double>(cfg.reference.max_newton)});
    put("solver.max_halvings", {static_cast<double>(cfg.reference.max_halvings)});
    put("solver.profile_rel_tol", {cfg.profile.rel_tol});
    put("solver.profile_abs_tol", {cfg.profile.abs_tol});
    {
        std::vector<double> grids(cfg.convergence_grids.begin(), cfg.convergence_grids.end());
        put("convergence.grids", grids);
    }
    std::sort(cfg.canonical.begin(), cfg.canonical.end());
    std::string joined;
    // The output location does not change results, so it stays out of the hash.
    for (const auto& [k, v] : cfg.canonical) {
        if (k != "output.dir") joined += k + "=" + v + "\n";
    }
    cfg.hash = fnv1a64(joined);
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path,
                           const std::vector<ConfigOverride>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), overrides);
}

ScenarioConfig default_config() { return parse_config(""); }

ScaledScenario scale(const ScenarioConfig& config) {
    ScaledScenario s;
    if (config.dimensional) {
        s.units = make_scaling(config.pipe, config.time_unit);
    } else {
        s.units.alpha_dimless = config.pipe.alpha;
    }
    const auto& u = s.units;
    s.pipe = PipeModel::dimensionless(u.alpha_dimless);
    const double lambda0 = config.lambda0 / u.lambda_unit();
    const double g0 = config.g0 / u.g_unit();
    const double tau = config.tau / u.time_unit;
    if (config.schedule == ScheduleKind::Frozen) {
        s.schedule = frozen_schedule(lambda0, g0);
    } else {
        s.schedule = modulated_schedule(lambda0, tau, g0);
        if (config.stretch != 1.0) s.schedule = stretch(s.schedule, config.stretch);
    }
    s.dt = config.dt / u.time_unit;
    s.t_end = config.t_end / u.time_unit;
    s.output_dt = config.output_dt / u.time_unit;
    s.linearized_dt = (config.linearized_dt > 0.0 ? config.linearized_dt : config.dt) / u.time_unit;
    for (double x : config.probes) s.probes.push_back(x / u.length_unit);
    for (double t : config.snapshot_times) s.snapshot_times.push_back(t / u.time_unit);
    return s;
}

}  // namespace gaspipe
