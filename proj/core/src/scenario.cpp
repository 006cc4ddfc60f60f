#include "gaspipe/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

#include "gaspipe/adiabatic_ba.hpp"
#include "gaspipe/adiabatic_ua.hpp"
#include "gaspipe/errors.hpp"
#include "gaspipe/linearized_solver.hpp"
#include "gaspipe/numerics.hpp"
#include "gaspipe/reference_solver.hpp"

namespace gaspipe {

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::Reference: return "reference";
        case Variant::UaLinearized: return "ua_linearized";
        case Variant::UaCorrected: return "ua_corrected";
        case Variant::UaBase: return "ua_base";
        case Variant::BaCorrected: return "ba_corrected";
        case Variant::BaBase: return "ba_base";
    }
    return "unknown";
}

TimeSeries probe_series(const std::vector<FieldSnapshot>& snapshots, const std::vector<double>& probes) {
    TimeSeries s;
    s.probes = probes;
    s.p.assign(probes.size(), {});
    s.phi.assign(probes.size(), {});
    for (const auto& snap : snapshots) {
        s.t.push_back(snap.t);
        for (std::size_t k = 0; k < probes.size(); ++k) {
            s.p[k].push_back(numerics::interpolate_linear(snap.x, snap.p, probes[k]));
            s.phi[k].push_back(numerics::interpolate_linear(snap.x, snap.phi, probes[k]));
        }
    }
    return s;
}

namespace {

ErrorNorms norms(const std::vector<double>& ref, const std::vector<double>& test) {
    double num2 = 0.0, den2 = 0.0, num_inf = 0.0, den_inf = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double d = test[i] - ref[i];
        num2 += d * d;
        den2 += ref[i] * ref[i];
        num_inf = std::max(num_inf, std::abs(d));
        den_inf = std::max(den_inf, std::abs(ref[i]));
    }
    ErrorNorms n;
    if (den2 > 0.0) {
        n.rel_l2 = std::sqrt(num2 / den2);
        n.rel_linf = num_inf / den_inf;
    } else {
        n.rel_l2 = num2 > 0.0 ? INFINITY : 0.0;
        n.rel_linf = num_inf > 0.0 ? INFINITY : 0.0;
    }
    return n;
}

bool same_grid(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > 1e-12 * std::max(1.0, std::abs(a[i]))) return false;
    }
    return true;
}

}  // namespace

std::vector<ProbeMetrics> error_metrics(const TimeSeries& reference, const TimeSeries& test) {
    if (!same_grid(reference.t, test.t)) {
        throw AlignmentError("time grids differ (" + std::to_string(reference.t.size()) + " vs " +
                             std::to_string(test.t.size()) + " samples)");
    }
    if (!same_grid(reference.probes, test.probes)) {
        throw AlignmentError("probe locations differ");
    }
    std::vector<ProbeMetrics> out;
    for (std::size_t k = 0; k < reference.probes.size(); ++k) {
        if (reference.p[k].size() != reference.t.size() || test.p[k].size() != test.t.size() ||
            reference.phi[k].size() != reference.t.size() || test.phi[k].size() != test.t.size()) {
            throw AlignmentError("series length does not match its time grid");
        }
        out.push_back({reference.probes[k], norms(reference.p[k], test.p[k]),
                       norms(reference.phi[k], test.phi[k])});
    }
    return out;
}

const VariantOutcome& BcRun::get(Variant v) const {
    for (const auto& o : variants) {
        if (o.variant == v) return o;
    }
    throw InvalidParameter("variant not present: " + std::string(to_string(v)));
}

const MetricRecord* BcRun::metric(Variant v, const std::string& variable, double probe) const {
    for (const auto& m : metrics) {
        if (m.variant == v && m.variable == variable && std::abs(m.probe - probe) < 1e-12) return &m;
    }
    return nullptr;
}

bool ScenarioResult::all_completed() const {
    for (const auto& run : runs) {
        for (const auto& v : run.variants) {
            if (!v.completed) return false;
        }
    }
    return !runs.empty();
}

const BcRun& ScenarioResult::get(BcKind kind) const {
    for (const auto& r : runs) {
        if (r.kind == kind) return r;
    }
    throw InvalidParameter("boundary kind not run: " + std::string(to_string(kind)));
}

std::vector<double> output_grid(double output_dt, double t_end) {
    if (!(output_dt > 0.0) || !(t_end >= 0.0)) {
        throw InvalidParameter("output grid needs output_dt > 0 and t_end >= 0");
    }
    const auto n = static_cast<std::size_t>(std::floor(t_end / output_dt + 1e-9));
    std::vector<double> times;
    for (std::size_t k = 0; k <= n; ++k) times.push_back(static_cast<double>(k) * output_dt);
    if (t_end - times.back() > 1e-9 * output_dt) {
        times.push_back(t_end);
    } else {
        times.back() = std::min(times.back(), t_end);
    }
    return times;
}

namespace {

struct Sampling {
    std::vector<double> times;             // union, sorted
    std::vector<std::size_t> series_index; // into times
    std::vector<std::size_t> field_index;  // into times
};

Sampling make_sampling(const ScaledScenario& s) {
    Sampling out;
    std::vector<double> all = output_grid(s.output_dt, s.t_end);
    all.insert(all.end(), s.snapshot_times.begin(), s.snapshot_times.end());
    std::sort(all.begin(), all.end());
    for (double t : all) {
        if (out.times.empty() || t - out.times.back() > 1e-9 * s.output_dt) out.times.push_back(t);
    }
    auto locate = [&](double t) {
        const auto it = std::lower_bound(out.times.begin(), out.times.end(), t - 1e-9 * s.output_dt);
        return static_cast<std::size_t>(it - out.times.begin());
    };
    for (double t : output_grid(s.output_dt, s.t_end)) out.series_index.push_back(locate(t));
    for (double t : s.snapshot_times) out.field_index.push_back(locate(t));
    return out;
}

using Snapshots = std::vector<FieldSnapshot>;

struct ReferenceRun {
    Snapshots snapshots;
    double defect = 0.0;
    std::size_t steps = 0;
};

ReferenceRun run_reference(const ScaledScenario& s, const ScenarioConfig& cfg, BcKind kind,
                           const std::vector<double>& x, const std::vector<double>& times) {
    const auto bc = ua_boundary(s.pipe, s.schedule, kind);
    const auto initial = ua_base(s.pipe, s.schedule, 0.0, x);
    ReferenceRun out;
    auto observer = [&out](const ReferenceSolver& solver, const PdeState& before, const PdeState& after) {
        const double change = solver.line_pack(after) - solver.line_pack(before);
        const double defect = std::abs(change - (after.inflow - after.outflow));
        out.defect = std::max(out.defect, defect / std::abs(solver.line_pack(after)));
        ++out.steps;
    };
    out.snapshots = solve_scenario(s.pipe, bc, initial, s.t_end, s.dt, times, cfg.reference, observer);
    return out;
}

Snapshots run_linearized(const ScaledScenario& s, const ScenarioConfig& cfg, BcKind kind,
                         const std::vector<double>& x, const std::vector<double>& times) {
    LinearizedOptions opts;
    opts.profile = cfg.profile;
    const auto corrections = linearized_solve(s.pipe, s.schedule, kind, x, s.linearized_dt, s.t_end, times, opts);
    Snapshots out;
    for (const auto& c : corrections) {
        const auto terms = adiabatic_terms(s.pipe, s.schedule, c.t, x, cfg.profile);
        out.push_back(apply_corrections(terms.base, {c.delta_phi, c.delta_p}));
    }
    return out;
}

std::pair<Snapshots, Snapshots> run_ua(const ScaledScenario& s, const ScenarioConfig& cfg, BcKind kind,
                                       const std::vector<double>& x, const std::vector<double>& times) {
    Snapshots corrected, base;
    for (double t : times) {
        const auto sol = ua_solution(s.pipe, adiabatic_terms(s.pipe, s.schedule, t, x, cfg.profile), kind);
        corrected.push_back(sol.corrected);
        base.push_back(sol.base);
    }
    return {std::move(corrected), std::move(base)};
}

std::pair<Snapshots, Snapshots> run_ba(const ScaledScenario& s, BcKind kind, const std::vector<double>& x,
                                       const std::vector<double>& times) {
    const auto bc = ua_boundary(s.pipe, s.schedule, kind);
    Snapshots corrected, base;
    for (double t : times) {
        const auto sol = ba_solution(s.pipe, bc, t, x);
        corrected.push_back(sol.corrected);
        base.push_back(sol.base);
    }
    return {std::move(corrected), std::move(base)};
}

std::string describe(const std::exception_ptr& error) {
    try {
        std::rethrow_exception(error);
    } catch (const std::exception& e) {
        return e.what();
    } catch (...) {
        return "unknown error";
    }
}

void fill(VariantOutcome& outcome, const Snapshots& snaps, const Sampling& sampling,
          const std::vector<double>& probes) {
    Snapshots series;
    for (std::size_t i : sampling.series_index) series.push_back(snaps.at(i));
    outcome.series = probe_series(series, probes);
    for (std::size_t i : sampling.field_index) outcome.fields.push_back(snaps.at(i));
    outcome.completed = true;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
    const auto scaled = scale(config);
    const auto sampling = make_sampling(scaled);
    const auto x = uniform_grid(1.0, config.nx);

    ScenarioResult result;
    result.hash = config.hash;
    result.units = scaled.units;

    struct Pending {
        BcKind kind;
        std::future<ReferenceRun> reference;
        std::future<Snapshots> linearized;
        std::future<std::pair<Snapshots, Snapshots>> ua;
        std::future<std::pair<Snapshots, Snapshots>> ba;
    };
    std::vector<Pending> pending;
    const auto& times = sampling.times;
    for (BcKind kind : config.bc_kinds) {
        Pending p{kind, {}, {}, {}, {}};
        p.reference = std::async(std::launch::async, [&, kind] { return run_reference(scaled, config, kind, x, times); });
        p.linearized = std::async(std::launch::async, [&, kind] { return run_linearized(scaled, config, kind, x, times); });
        p.ua = std::async(std::launch::async, [&, kind] { return run_ua(scaled, config, kind, x, times); });
        p.ba = std::async(std::launch::async, [&, kind] { return run_ba(scaled, kind, x, times); });
        pending.push_back(std::move(p));
    }

    for (auto& p : pending) {
        BcRun run;
        run.kind = p.kind;
        for (Variant v : kAllVariants) {
            VariantOutcome o;
            o.variant = v;
            run.variants.push_back(std::move(o));
        }
        auto slot = [&run](Variant v) -> VariantOutcome& {
            return run.variants[static_cast<std::size_t>(v)];
        };
        auto failed = [&](std::initializer_list<Variant> vs, const std::exception_ptr& e) {
            for (Variant v : vs) {
                slot(v).error = std::string(to_string(v)) + ": " + describe(e);
            }
        };
        try {
            auto ref = p.reference.get();
            run.line_pack_defect = ref.defect;
            run.reference_steps = ref.steps;
            fill(slot(Variant::Reference), ref.snapshots, sampling, scaled.probes);
        } catch (...) {
            failed({Variant::Reference}, std::current_exception());
        }
        try {
            fill(slot(Variant::UaLinearized), p.linearized.get(), sampling, scaled.probes);
        } catch (...) {
            failed({Variant::UaLinearized}, std::current_exception());
        }
        try {
            const auto [corrected, base] = p.ua.get();
            fill(slot(Variant::UaCorrected), corrected, sampling, scaled.probes);
            fill(slot(Variant::UaBase), base, sampling, scaled.probes);
        } catch (...) {
            failed({Variant::UaCorrected, Variant::UaBase}, std::current_exception());
        }
        try {
            const auto [corrected, base] = p.ba.get();
            fill(slot(Variant::BaCorrected), corrected, sampling, scaled.probes);
            fill(slot(Variant::BaBase), base, sampling, scaled.probes);
        } catch (...) {
            failed({Variant::BaCorrected, Variant::BaBase}, std::current_exception());
        }

        const auto& reference = slot(Variant::Reference);
        if (reference.completed) {
            for (const auto& o : run.variants) {
                if (o.variant == Variant::Reference || !o.completed) continue;
                for (const auto& m : error_metrics(reference.series, o.series)) {
                    run.metrics.push_back({p.kind, o.variant, m.probe, "p", m.p});
                    run.metrics.push_back({p.kind, o.variant, m.probe, "phi", m.phi});
                }
            }
        }
        result.runs.push_back(std::move(run));
    }
    return result;
}

namespace {

struct OutputUnits {
    double t = 1.0, x = 1.0, p = 1.0, phi = 1.0;
    std::string label;
};

OutputUnits output_units(const ScenarioConfig& config, const ScalingUnits& u) {
    if (!config.dimensional || config.dimensionless_output) {
        return {1.0, 1.0, 1.0, 1.0, "t [1], x [1], p [1], phi [1]"};
    }
    return {u.time_unit, u.length_unit, u.pressure_unit, u.flux_unit,
            "t [s], x [m], p [Pa], phi [kg/(m^2 s)]"};
}

void header(std::ostream& out, const ScenarioConfig& config, const std::string& what,
            const OutputUnits& units) {
    out << std::setprecision(10);
    out << "# gaspipe " << what << "\n";
    out << "# config_hash=" << hash_hex(config.hash) << "\n";
    out << "# units: " << units.label << "\n";
    out << "# grid: nx=" << config.nx << " dt=" << config.dt << " t_end=" << config.t_end
        << " output_dt=" << config.output_dt << "\n";
    out << "# tolerances: newton_tol=" << config.reference.newton_tol
        << " epsilon=" << config.reference.epsilon << " profile_rel_tol=" << config.profile.rel_tol
        << " profile_abs_tol=" << config.profile.abs_tol << "\n";
    out << std::setprecision(17);
}

std::ofstream open(const std::filesystem::path& path) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << std::setprecision(17);
    return out;
}

}  // namespace

void write_results(const ScenarioConfig& config, const ScenarioResult& result,
                   const std::filesystem::path& dir) {
    const auto units = output_units(config, result.units);
    {
        auto out = open(dir / "config.resolved.ini");
        out << "# config_hash=" << hash_hex(config.hash) << "\n";
        for (const auto& [k, v] : config.canonical) out << k << " = " << v << "\n";
    }
    for (const auto& run : result.runs) {
        const auto bc = std::string(to_string(run.kind));
        for (const auto& o : run.variants) {
            const auto name = std::string(to_string(o.variant));
            {
                auto out = open(dir / bc / (name + ".csv"));
                header(out, config, "probe series variant=" + name + " bc=" + bc, units);
                out << "# status=" << (o.completed ? "completed" : "failed: " + o.error) << "\n";
                out << "t,x,p,phi\n";
                const auto& s = o.series;
                for (std::size_t i = 0; i < s.t.size(); ++i) {
                    for (std::size_t k = 0; k < s.probes.size(); ++k) {
                        out << s.t[i] * units.t << "," << s.probes[k] * units.x << ","
                            << s.p[k][i] * units.p << "," << s.phi[k][i] * units.phi << "\n";
                    }
                }
            }
            if (config.snapshot_times.empty()) continue;
            auto out = open(dir / bc / "fields" / (name + ".csv"));
            header(out, config, "field snapshots variant=" + name + " bc=" + bc, units);
            out << "t,x,p,phi\n";
            for (const auto& snap : o.fields) {
                for (std::size_t i = 0; i < snap.x.size(); ++i) {
                    out << snap.t * units.t << "," << snap.x[i] * units.x << "," << snap.p[i] * units.p
                        << "," << snap.phi[i] * units.phi << "\n";
                }
            }
        }
    }
    {
        auto out = open(dir / "metrics.csv");
        out << "# gaspipe error metrics against the reference, relative over time\n";
        out << "# config_hash=" << hash_hex(config.hash) << "\n";
        out << "bc,variant,probe_x,variable,rel_l2,rel_linf\n";
        for (const auto& run : result.runs) {
            for (const auto& m : run.metrics) {
                out << to_string(m.kind) << "," << to_string(m.variant) << "," << m.probe * units.x
                    << "," << m.variable << "," << m.norms.rel_l2 << "," << m.norms.rel_linf << "\n";
            }
        }
    }
    auto out = open(dir / "manifest.csv");
    out << "# config_hash=" << hash_hex(config.hash) << "\n";
    out << "bc,variant,status,message\n";
    for (const auto& run : result.runs) {
        for (const auto& o : run.variants) {
            std::string message = o.error;
            std::replace(message.begin(), message.end(), ',', ';');
            std::replace(message.begin(), message.end(), '\n', ' ');
            out << to_string(run.kind) << "," << to_string(o.variant) << ","
                << (o.completed ? "completed" : "failed") << "," << message << "\n";
        }
        out << to_string(run.kind) << ",reference_line_pack_defect,"
            << (run.variants.front().completed ? "completed" : "failed") << ",max_rel="
            << run.line_pack_defect << "\n";
    }
}

ScenarioResult run(const std::filesystem::path& config_path, const std::vector<ConfigOverride>& overrides) {
    const auto config = load_config(config_path, overrides);
    auto result = run_scenario(config);
    write_results(config, result, config.results_dir);
    return result;
}

std::vector<ConvergenceStudy> convergence_study(const ScenarioConfig& config) {
    const auto& grids = config.convergence_grids;
    if (grids.size() < 3) throw ConfigError("convergence study needs at least three grids");
    for (std::size_t k = 1; k < grids.size(); ++k) {
        if (grids[k] - 1 != 2 * (grids[k - 1] - 1)) {
            throw ConfigError("convergence grids must be nested with ratio 2 (e.g. 201 401 801)");
        }
    }
    const auto s = scale(config);
    const std::vector<double> final_time{s.t_end};

    std::vector<ConvergenceStudy> studies;
    for (BcKind kind : config.bc_kinds) {
        const auto bc = ua_boundary(s.pipe, s.schedule, kind);
        std::vector<std::future<std::vector<double>>> jobs;
        std::vector<double> dts;
        for (std::size_t k = 0; k < grids.size(); ++k) {
            const double ratio = static_cast<double>(grids[0] - 1) / static_cast<double>(grids[k] - 1);
            const double dt = s.dt * ratio * ratio;
            dts.push_back(dt);
            const std::size_t stride = (grids[k] - 1) / (grids[0] - 1);
            jobs.push_back(std::async(std::launch::async, [&, k, dt, stride] {
                const auto x = uniform_grid(1.0, grids[k]);
                const auto initial = ua_base(s.pipe, s.schedule, 0.0, x);
                const auto snaps = solve_scenario(s.pipe, bc, initial, s.t_end, dt, final_time, config.reference);
                std::vector<double> coarse;
                for (std::size_t i = 0; i < x.size(); i += stride) coarse.push_back(snaps.back().p[i]);
                return coarse;
            }));
        }
        std::vector<std::vector<double>> solutions;
        for (auto& j : jobs) solutions.push_back(j.get());

        auto diff = [](const std::vector<double>& a, const std::vector<double>& b) {
            double sum = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
            return std::sqrt(sum / static_cast<double>(a.size()));
        };
        const std::size_t n = solutions.size();
        const double d_coarse = diff(solutions[n - 3], solutions[n - 2]);
        const double d_fine = diff(solutions[n - 2], solutions[n - 1]);
        ConvergenceStudy study;
        study.kind = kind;
        study.observed_order = std::log2(d_coarse / d_fine);
        const double factor = std::pow(2.0, study.observed_order) - 1.0;
        std::vector<double> extrapolant(solutions.back().size());
        for (std::size_t i = 0; i < extrapolant.size(); ++i) {
            extrapolant[i] = solutions[n - 1][i] + (solutions[n - 1][i] - solutions[n - 2][i]) / factor;
        }
        double norm = 0.0;
        for (double v : extrapolant) norm += v * v;
        norm = std::sqrt(norm / static_cast<double>(extrapolant.size()));
        for (std::size_t k = 0; k < n; ++k) {
            study.levels.push_back({grids[k], dts[k], diff(solutions[k], extrapolant) / norm});
        }
        studies.push_back(std::move(study));
    }
    return studies;
}

void write_convergence(const ScenarioConfig& config, const std::vector<ConvergenceStudy>& studies,
                       const std::filesystem::path& dir) {
    auto out = open(dir / "convergence.csv");
    out << "# gaspipe reference self-convergence at t_end, dt scaled with h^2, scaled units\n";
    out << "# config_hash=" << hash_hex(config.hash) << "\n";
    out << "bc,nx,dt,rel_l2_vs_richardson,observed_order\n";
    for (const auto& s : studies) {
        for (const auto& l : s.levels) {
            out << to_string(s.kind) << "," << l.nx << "," << l.dt << "," << l.error_l2 << ","
                << s.observed_order << "\n";
        }
    }
}

}  // namespace gaspipe
