// hystflow: command-line driver. Exit codes: 0 pass, 2 a numerical
// assertion failed, 1 usage, config or I/O error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hystflow/experiments/comparison.hpp"
#include "hystflow/experiments/front_bound.hpp"
#include "hystflow/experiments/loops.hpp"
#include "hystflow/experiments/regimes.hpp"
#include "hystflow/hysteresis/validate.hpp"
#include "hystflow/io/config.hpp"
#include "hystflow/io/csv.hpp"
#include "hystflow/io/json.hpp"
#include "hystflow/io/svg.hpp"
#include "hystflow/solver/validate_state.hpp"
#include "hystflow/wave/envelope.hpp"
#include "hystflow/wave/profile.hpp"

namespace fs = std::filesystem;
using namespace hystflow;

namespace {

constexpr int kPass = 0;
constexpr int kUsage = 1;
constexpr int kAssertion = 2;

struct Globals {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

struct Context {
    io::RunConfig cfg;
    fs::path out;
    bool quiet = false;

    std::ostream& log() const {
        static std::ostream null(nullptr);
        return quiet ? null : std::cout;
    }
    fs::path file(const std::string& name) const { return out / name; }
};

// validate passes no scenario: it accepts whatever the config names
Context load(const Globals& g, std::optional<io::Scenario> scenario) {
    Context ctx;
    if (!g.config.empty()) {
        ctx.cfg = io::load_config(g.config, scenario);
    } else {
        ctx.cfg.scenario = scenario.value_or(io::Scenario::simulate);
        if (scenario == io::Scenario::front_bound || scenario == io::Scenario::comparison)
            ctx.cfg.setup.initial.kind = InitialSpec::Kind::bump;
    }
    if (g.seed) ctx.cfg.seed = *g.seed;
    ctx.out = g.out.empty() ? fs::path(ctx.cfg.output.directory) : fs::path(g.out);
    ctx.quiet = g.quiet;
    return ctx;
}

void plot(const Context& ctx, std::span<const Series> set, io::PlotKind kind, const std::string& name,
          const std::string& title) {
    if (!ctx.cfg.output.svg) return;
    try {
        io::emit_plot(set, kind, ctx.file(name), title);
    } catch (const DomainError& e) {
        // plots never decide the exit code
        std::cerr << "warning: " << name << " not written: " << e.what() << '\n';
    }
}

Series diagnostics_series(const std::vector<StepDiagnostics>& ds) {
    Series s({"t", "energy", "mass", "gradient_p_norm", "support_radius", "max_abs_u", "inner_iterations", "residual"});
    for (const auto& d : ds)
        s.push({d.time, d.energy, d.mass, d.gradient_p_norm, d.support_radius, d.max_abs_u,
                static_cast<double>(d.inner_iterations), d.residual});
    return s;
}

Series profile_series(const Model& model, const SimulationState& s) {
    Series out({"x", "u", "theta"});
    for (std::size_t j = 0; j < s.u.size(); ++j) out.push({model.mesh.x(j), s.u[j], s.theta[j]});
    return out;
}

void print_report(const Context& ctx, const ValidationReport& r) {
    if (!r.items().empty()) ctx.log() << r;
}

// ---- simulate ---------------------------------------------------------------

int run_comparison(const Context& ctx) {
    const auto& c = ctx.cfg;
    ComparisonOptions opt;
    opt.order_tol = c.comparison.order_tol;
    opt.check_determinism = c.comparison.determinism;
    const auto rep = comparison_experiment(c.setup, c.comparison.factor, opt);
    if (c.output.csv && !rep.series.empty()) io::write_timeseries(rep.series, ctx.file("comparison.csv"));
    if (c.output.json) io::write_json(io::to_json(rep), ctx.file("comparison.json"));
    ctx.log() << "comparison: " << (rep.passed ? "PASS" : "FAIL") << "  max violation " << rep.max_violation
              << "  deterministic " << (rep.deterministic ? "yes" : "no") << "  steps " << rep.steps_run << '\n';
    if (!rep.failure.empty()) ctx.log() << "  " << rep.failure << '\n';
    return rep.passed ? kPass : kAssertion;
}

int cmd_simulate(const Globals& g) {
    if (g.config.empty()) throw ConfigError("simulate: --config is required");
    const Context ctx = load(g, io::Scenario::simulate);
    const auto& c = ctx.cfg;
    if (c.scenario == io::Scenario::comparison) return run_comparison(ctx);

    const Model model = make_model(c.setup);
    const auto s0 = make_initial(c.setup, model);
    const auto check = validate_initial_state(model, s0);
    print_report(ctx, check);
    if (check.has_failures()) {
        std::cerr << "error: initial state is inadmissible\n";
        return kAssertion;
    }
    std::size_t next_snapshot = c.output.snapshot_every;
    auto observer = [&](const SimulationState& s) {
        if (c.output.snapshot_every && s.step == next_snapshot) {
            io::write_snapshot(model, s, ctx.file("snapshot_" + std::to_string(s.step) + ".csv"));
            next_snapshot += c.output.snapshot_every;
        }
    };
    Trajectory traj;
    try {
        traj = run_simulation(s0, c.setup.tau, c.setup.steps, model, c.setup.solver, observer);
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violated: " << e.what() << '\n';
        return kAssertion;
    } catch (const NonConvergence& e) {
        std::cerr << "solver failed: " << e.what() << '\n';
        return kAssertion;
    }
    const auto& fin = traj.final_state;
    if (c.output.csv) {
        io::write_timeseries(diagnostics_series(traj.diagnostics), ctx.file("diagnostics.csv"));
        io::write_series(profile_series(model, fin), ctx.file("profile.csv"));
    }
    io::write_snapshot(model, fin, ctx.file("snapshot_final.csv"));
    const Series prof = profile_series(model, fin);
    plot(ctx, std::span<const Series>(&prof, 1), io::PlotKind::profile, "profile.svg", "final state");
    const auto& d = fin.diagnostics;
    ctx.log() << "simulate: " << fin.step << " steps to t = " << fin.time << "  support " << d.support_radius
              << "  max|u| " << d.max_abs_u << "  mass " << d.mass << '\n';
    return kPass;
}

// ---- wave -------------------------------------------------------------------

int cmd_wave(const Globals& g) {
    const Context ctx = load(g, io::Scenario::wave);
    const auto& c = ctx.cfg;
    const auto& S = c.setup;
    const double kappa = S.permeability.base(0.0);
    const double R = c.wave.R.value_or(0.5 * (c.wave.R0 + S.geometry.L));
    const double speed = c.wave.c ? *c.wave.c : min_wave_speed(R, c.wave.R0, S.lambda_max, kappa, S.p, S.density);
    WaveProfileOptions popt;
    popt.u_ref = S.lambda_max;
    const auto prof = build_wave_profile(S.density, S.p, kappa, speed, popt);
    const auto env = make_front_envelope(S.density, S.p, kappa, S.lambda_max, c.wave.R0);

    Series shape = prof.to_series(c.wave.points);
    Series envelope = envelope_series(env, c.wave.t_end, c.wave.points);
    double max_res = 0.0;
    const double zmax = prof.z_max();
    for (std::size_t i = 1; i < c.wave.points; ++i)
        max_res = std::max(max_res, std::abs(prof.residual(zmax * static_cast<double>(i) / double(c.wave.points))));
    if (c.output.csv) {
        io::write_series(shape, ctx.file("wave_profile.csv"));
        io::write_timeseries(envelope, ctx.file("envelope.csv"));
    }
    if (c.output.json)
        io::write_json({{"p", S.p},
                        {"kappa", kappa},
                        {"c", speed},
                        {"c_star", prof.c_star()},
                        {"z_max", zmax},
                        {"F_lambda", prof.F(S.lambda_max)},
                        {"lambda_bar", env.lambda_bar},
                        {"C_p", env.C_p},
                        {"R0", env.R0},
                        {"max_ode_residual", max_res},
                        {"max_table_residual", prof.max_table_residual()}},
                       ctx.file("wave.json"));
    plot(ctx, std::span<const Series>(&shape, 1), io::PlotKind::profile, "wave_profile.svg", "travelling wave");
    ctx.log() << "wave: c = " << speed << "  z_max = " << zmax << "  C_p = " << env.C_p
              << "  max ODE residual " << max_res << '\n';
    return kPass;
}

// ---- front ------------------------------------------------------------------

int cmd_front(const Globals& g) {
    const Context ctx = load(g, io::Scenario::front_bound);
    const auto& c = ctx.cfg;
    const auto rep = front_bound_experiment(c.setup, c.front);
    print_report(ctx, rep.validation);
    if (c.output.csv && !rep.series.empty()) {
        io::write_timeseries(rep.series, ctx.file("front.csv"));
        io::write_timeseries(diagnostics_series(rep.diagnostics), ctx.file("diagnostics.csv"));
    }
    if (c.output.json) io::write_json(io::to_json(rep), ctx.file("front.json"));
    if (rep.series.rows() >= 2) plot(ctx, std::span<const Series>(&rep.series, 1), io::PlotKind::front, "front.svg",
                                     "support radius and envelope");
    ctx.log() << "front: " << (rep.passed ? "PASS" : "FAIL") << "  C_p " << rep.C_p << "  min margin "
              << rep.min_margin << "  max comparison " << rep.max_comparison << "  max energy balance "
              << rep.max_energy_balance << "  max|u| " << rep.max_abs_u << "  steps " << rep.steps_run << "  "
              << rep.runtime_seconds << " s\n";
    if (!rep.failure.empty()) ctx.log() << "  " << rep.failure << '\n';
    return rep.passed ? kPass : kAssertion;
}

// ---- regimes ----------------------------------------------------------------

int cmd_regimes(const Globals& g) {
    const Context ctx = load(g, io::Scenario::regimes);
    const auto& c = ctx.cfg;
    const auto rows = regime_classification(c.regimes.p_list, c.setup.density, c.setup.lambda_max);
    Series table({"p", "F", "slow"});
    for (const auto& r : rows) {
        table.push({r.p, r.F.value, r.slow ? 1.0 : 0.0});
        ctx.log() << "p = " << r.p << "  F = " << (r.F.is_finite() ? std::to_string(r.F.value) : "divergent") << "  "
                  << r.classification << "  (" << r.note << ")\n";
    }
    if (c.output.csv) io::write_series(table, ctx.file("regimes.csv"));
    if (c.output.json) io::write_json(io::to_json(rows), ctx.file("regimes.json"));
    if (c.regimes.growth_steps > 0) {
        std::vector<Series> growth;
        for (double p : c.regimes.p_list) {
            SimulationSetup s = c.setup;
            s.p = p;
            s.steps = c.regimes.growth_steps;
            s.initial.kind = InitialSpec::Kind::bump;
            Series r = support_growth(s);
            r.names[1] = "R_supp_p" + io::format_double(p).substr(0, 4);
            if (c.output.csv) io::write_timeseries(r, ctx.file("growth_p" + std::to_string(int(p * 100)) + ".csv"));
            growth.push_back(std::move(r));
        }
        plot(ctx, growth, io::PlotKind::profile, "growth.svg", "support radius by exponent");
    }
    return kPass;
}

// ---- loops ------------------------------------------------------------------

int cmd_loops(const Globals& g) {
    const Context ctx = load(g, io::Scenario::loops);
    const auto& c = ctx.cfg;
    LoopOptions opt;
    opt.lambda_max = c.setup.lambda_max;
    opt.points_per_leg = c.loops.points_per_leg;
    const auto lt = loop_experiment(c.setup.density, c.loops.path, opt);
    if (c.output.csv) {
        io::write_series(lt.trace, ctx.file("loop.csv"));
        io::write_series(lt.limits, ctx.file("limits.csv"));
        io::write_series(lt.primary, ctx.file("primary.csv"));
    }
    // return-point check: revisiting a path value after a closed excursion
    // must give back the same output
    double worst = 0.0;
    const auto& path = c.loops.path;
    for (std::size_t i = 0; i + 2 < path.size(); ++i)
        if (path[i + 2] == path[i] && (i == 0 || (path[i] - path[i - 1]) * (path[i + 1] - path[i]) < 0.0))
            worst = std::max(worst, std::abs(lt.vertex_theta[i + 2] - lt.vertex_theta[i]));
    if (c.output.json)
        io::write_json({{"path", path}, {"vertex_theta", lt.vertex_theta}, {"return_point_error", worst}},
                       ctx.file("loop.json"));
    const std::vector<Series> set{lt.trace, lt.limits};
    plot(ctx, set, io::PlotKind::loop, "loop.svg", "hysteresis loop");
    ctx.log() << "loops: " << lt.trace.rows() << " samples, return-point error " << worst << '\n';
    return worst <= 1e-12 ? kPass : kAssertion;
}

// ---- validate ---------------------------------------------------------------

bool play_vi_holds(double xi_prev, double u, double r, double xi, double dz) {
    const double tol = 1e-12;
    if (std::abs(u - xi) > r + tol) return false;
    const auto n = static_cast<std::size_t>(std::ceil(2.0 * r / dz));
    for (std::size_t k = 0; k <= n; ++k) {
        const double z = std::min(-r + static_cast<double>(k) * dz, r);
        if ((xi - xi_prev) * (u - xi - z) < -tol) return false;
    }
    return true;
}

int cmd_validate(const Globals& g) {
    const Context ctx = load(g, std::nullopt);
    const auto& c = ctx.cfg;
    ValidationReport report;
    report.append(validate_hysteresis_inputs(c.setup.density, MemoryCurve(c.setup.lambda_max)));
    if (!g.config.empty()) {
        const Model model = make_model(c.setup);
        InitialStateCheckOptions opt;
        opt.front_experiment = c.scenario == io::Scenario::front_bound;
        opt.R0 = c.front.R0;
        report.append(validate_initial_state(model, make_initial(c.setup, model), opt));
    }

    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> U(-2.0, 2.0), R(0.0, 1.0);
    std::size_t bad = 0;
    std::string witness;
    for (std::size_t n = 0; n < c.property_samples; ++n) {
        const double xi_prev = U(rng), u = U(rng), r = R(rng);
        const double xi = play_update(xi_prev, u, r);
        if (!play_vi_holds(xi_prev, u, r, xi, 1e-3) && bad++ == 0)
            witness = detail::cat("xi_prev=", xi_prev, " u=", u, " r=", r, " -> xi=", xi);
    }
    report.add("play update satisfies the variational inequality", bad ? CheckStatus::fail : CheckStatus::pass_sampled,
               bad ? witness : detail::cat(c.property_samples, " random triples, seed ", c.seed));
    print_report(ctx, report);
    if (c.output.json) io::write_json(io::to_json(report), ctx.file("validation.json"));
    return report.has_failures() ? kAssertion : kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hystflow: flow with Preisach hysteresis and p-Laplacian diffusion"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config, "YAML run configuration");
    app.add_option("--out", g.out, "output directory (overrides [output].directory)");
    app.add_option("--seed", g.seed, "seed for randomized checks");
    app.add_flag("--quiet", g.quiet, "print nothing on success");

    struct Cmd {
        const char* name;
        const char* help;
        int (*run)(const Globals&);
    };
    const Cmd cmds[] = {
        {"simulate", "run the time stepper (or the comparison scenario)", cmd_simulate},
        {"wave", "travelling-wave profile and front envelope", cmd_wave},
        {"front", "support radius against the front envelope", cmd_front},
        {"regimes", "finite or divergent wave integral by exponent", cmd_regimes},
        {"loops", "single-point hysteresis loops", cmd_loops},
        {"validate", "input checks and randomized play-operator checks", cmd_validate},
    };
    int (*chosen)(const Globals&) = nullptr;
    for (const auto& c : cmds) app.add_subcommand(c.name, c.help)->callback([&chosen, &c] { chosen = c.run; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    try {
        return chosen(g);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
    } catch (const UnsupportedExponent& e) {
        std::cerr << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return kUsage;
}
