#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hystflow/experiments/scenario.hpp"
#include "hystflow/series.hpp"
#include "hystflow/solver/validate_state.hpp"
#include "hystflow/wave/envelope.hpp"
#include "hystflow/wave/profile.hpp"

namespace hystflow {

struct FrontBoundOptions {
    double R0 = 1.0;
    std::optional<double> R1;  // default: domain extent
    std::optional<double> R;   // offset of the dominating wave, default (R0 + R1) / 2
    double envelope_scale = 1.0;  // < 1 turns the run into a canary that must fail
    double comparison_tol = 1e-8;
    double slack_cells = 2.0;
    bool stop_at_first_violation = false;
};

struct FrontBoundReport {
    bool passed = false;
    std::string failure;
    std::optional<std::size_t> first_violation_step;
    std::size_t steps_run = 0;
    double C_p = 0.0;
    double lambda_bar = 0.0;
    double wave_speed = 0.0;
    double wave_offset = 0.0;
    double R1 = 0.0;
    double slack = 0.0;
    double min_margin = kInf;       // min over steps of R(t) - R_supp(t)
    double max_comparison = -kInf;  // max over steps of comparison_check
    double max_energy_balance = -kInf;
    double max_abs_u = 0.0;
    double max_mass_drift = 0.0;  // relative to the initial mass
    int max_inner_iterations = 0;
    double runtime_seconds = 0.0;
    ValidationReport validation;
    Series series{{"t", "R_supp", "R_envelope", "margin", "comparison"}};
    std::vector<StepDiagnostics> diagnostics;
};

/// Runs the solver from the configured initial data and checks, at every
/// step, R_supp(t) <= R(t) + slack with R(t) = R0 + C_p t^{1/p}, and that the
/// travelling wave with offset R and minimal admissible speed dominates |u|.
inline FrontBoundReport front_bound_experiment(const SimulationSetup& setup, const FrontBoundOptions& opt = {}) {
    const auto t_start = std::chrono::steady_clock::now();
    if (!wave_integral_converges(setup.p))
        throw UnsupportedExponent("front-bound experiment needs p > 3, got p = " + std::to_string(setup.p));
    if (setup.permeability.kind() != Permeability::Kind::constant)
        throw DomainError("front-bound experiment needs a constant permeability");
    const Model model = make_model(setup);
    const double kappa = setup.permeability.base(0.0);
    const double extent = setup.geometry.L;

    FrontBoundReport rep;
    rep.R1 = opt.R1.value_or(extent);
    if (!(opt.R0 > 0.0 && opt.R0 < rep.R1 && rep.R1 <= extent))
        throw DomainError("front-bound experiment: need 0 < R0 < R1 <= domain extent");
    rep.wave_offset = opt.R.value_or(0.5 * (opt.R0 + rep.R1));
    if (!(rep.wave_offset > opt.R0 && rep.wave_offset < rep.R1))
        throw DomainError("front-bound experiment: wave offset R must lie in (R0, R1)");
    rep.slack = opt.slack_cells * model.mesh.dx();

    const auto env = make_front_envelope(setup.density, setup.p, kappa, setup.lambda_max, opt.R0);
    rep.C_p = env.C_p;
    rep.lambda_bar = env.lambda_bar;
    rep.wave_speed = min_wave_speed(rep.wave_offset, opt.R0, setup.lambda_max, kappa, setup.p, setup.density);
    const auto profile = build_wave_profile(setup.density, setup.p, kappa, rep.wave_speed);

    const SimulationState initial = make_initial(setup, model);
    InitialStateCheckOptions vopt;
    vopt.front_experiment = true;
    vopt.R0 = opt.R0;
    rep.validation = validate_initial_state(model, initial, vopt);
    if (rep.validation.has_failures()) {
        rep.failure = "initial data not admissible for the front experiment";
        rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        return rep;
    }

    const double M0 = initial.diagnostics.mass;
    std::optional<StepDiagnostics> prev;
    bool stop = false;
    auto record = [&](const SimulationState& s) {
        const auto& d = s.diagnostics;
        const double R_env = opt.envelope_scale * envelope_radius(s.time, env);
        const double margin = R_env - d.support_radius;
        const double cmp = comparison_check(model.mesh, s.u, s.time, rep.wave_offset, profile);
        rep.series.push({s.time, d.support_radius, R_env, margin, cmp});
        rep.diagnostics.push_back(d);
        rep.min_margin = std::min(rep.min_margin, margin);
        rep.max_comparison = std::max(rep.max_comparison, cmp);
        rep.max_abs_u = std::max(rep.max_abs_u, d.max_abs_u);
        rep.max_inner_iterations = std::max(rep.max_inner_iterations, d.inner_iterations);
        if (M0 != 0.0) rep.max_mass_drift = std::max(rep.max_mass_drift, std::abs(d.mass - M0) / std::abs(M0));
        if (prev) rep.max_energy_balance = std::max(rep.max_energy_balance, energy_balance(model, *prev, d, setup.tau));
        prev = d;
        rep.steps_run = s.step;
        if (!rep.first_violation_step && (margin < -rep.slack || cmp > opt.comparison_tol)) {
            rep.first_violation_step = s.step;
            rep.failure = margin < -rep.slack
                              ? detail::cat("support radius ", d.support_radius, " exceeds R(t) + slack = ",
                                            R_env + rep.slack, " at step ", s.step, " (t = ", s.time, ")")
                              : detail::cat("comparison violation ", cmp, " above ", opt.comparison_tol, " at step ",
                                            s.step, " (t = ", s.time, ")");
            if (opt.stop_at_first_violation) stop = true;
        }
    };

    record(initial);
    SimulationState s = initial;
    try {
        for (std::size_t i = 0; i < setup.steps && !stop; ++i) {
            SimulationState next = time_step(s, setup.tau, model, setup.solver);
            if (setup.solver.check_invariants)
                check_step_invariants(model, s.diagnostics, next.diagnostics, setup.tau, setup.solver);
            record(next);
            s = std::move(next);
        }
    } catch (const InvariantViolation& e) {
        rep.failure = detail::cat("invariant violated at step ", e.step(), ": ", e.what());
        if (!rep.first_violation_step) rep.first_violation_step = e.step();
    } catch (const NonConvergence& e) {
        rep.failure = detail::cat("solver failed after step ", s.step, ": ", e.what());
        if (!rep.first_violation_step) rep.first_violation_step = s.step + 1;
    }
    rep.passed = rep.failure.empty();
    rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

}  // namespace hystflow
