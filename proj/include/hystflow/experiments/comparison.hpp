#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <optional>
#include <string>

#include "hystflow/experiments/scenario.hpp"
#include "hystflow/series.hpp"
#include "hystflow/solver/validate_state.hpp"

namespace hystflow {

struct ComparisonOptions {
    double order_tol = 1e-9;
    bool check_determinism = true;  // rerun the lower state and compare bitwise
};

struct ComparisonReport {
    bool passed = false;
    bool initially_ordered = false;
    bool ordered = false;
    bool deterministic = true;
    std::optional<std::size_t> first_violation_step;
    double max_violation = -kInf;  // max over steps and nodes of u1 - u2
    std::size_t steps_run = 0;
    double runtime_seconds = 0.0;
    std::string failure;
    Series series{{"t", "max_violation", "mass_lower", "mass_upper"}};
};

/// Two runs with the same model and time step from nodewise ordered initial
/// data; checks u1 <= u2 + order_tol at every step.
inline ComparisonReport comparison_experiment(const Model& model, const SimulationState& lower,
                                              const SimulationState& upper, double tau, std::size_t steps,
                                              const SolverOptions& solver = {}, const ComparisonOptions& opt = {}) {
    const auto t_start = std::chrono::steady_clock::now();
    if (model.permeability.depends_on_theta())
        throw DomainError("comparison experiment needs a permeability independent of theta");
    ComparisonReport rep;

    auto violation = [](const SimulationState& a, const SimulationState& b) {
        double v = -kInf;
        for (std::size_t j = 0; j < a.u.size(); ++j) v = std::max(v, a.u[j] - b.u[j]);
        return v;
    };
    rep.initially_ordered = violation(lower, upper) <= 0.0;
    for (std::size_t j = 0; j < lower.theta.size() && rep.initially_ordered; ++j)
        if (lower.theta[j] > upper.theta[j]) rep.initially_ordered = false;
    if (!rep.initially_ordered) {
        rep.failure = "initial states are not nodewise ordered";
        return rep;
    }

    SimulationState a = lower, b = upper;
    std::optional<SimulationState> again;
    if (opt.check_determinism) again = lower;
    auto record = [&](const SimulationState& x, const SimulationState& y) {
        const double v = violation(x, y);
        rep.series.push({x.time, v, x.diagnostics.mass, y.diagnostics.mass});
        rep.max_violation = std::max(rep.max_violation, v);
        if (!rep.first_violation_step && v > opt.order_tol) {
            rep.first_violation_step = x.step;
            rep.failure = detail::cat("u1 - u2 = ", v, " above ", opt.order_tol, " at step ", x.step);
        }
    };
    record(a, b);
    try {
        for (std::size_t i = 0; i < steps; ++i) {
            a = time_step(a, tau, model, solver);
            b = time_step(b, tau, model, solver);
            if (again) {
                *again = time_step(*again, tau, model, solver);
                if (rep.deterministic && again->u != a.u) {
                    rep.deterministic = false;
                    if (rep.failure.empty()) rep.failure = detail::cat("rerun differs at step ", a.step);
                }
            }
            record(a, b);
            rep.steps_run = a.step;
        }
    } catch (const NonConvergence& e) {
        rep.failure = detail::cat("solver failed after step ", rep.steps_run, ": ", e.what());
    }
    rep.ordered = !rep.first_violation_step.has_value();
    rep.passed = rep.failure.empty();
    rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

/// Lower state: the configured initial data. Upper state: the same data
/// scaled by `factor` and capped at Lambda.
inline ComparisonReport comparison_experiment(const SimulationSetup& setup, double factor = 1.1,
                                              const ComparisonOptions& opt = {}) {
    const Model model = make_model(setup);
    SimulationSetup up = setup;
    up.initial.scale *= factor;
    return comparison_experiment(model, make_initial(setup, model), make_initial(up, model), setup.tau, setup.steps,
                                 setup.solver, opt);
}

}  // namespace hystflow
