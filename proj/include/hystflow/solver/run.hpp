#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "hystflow/errors.hpp"
#include "hystflow/solver/state.hpp"
#include "hystflow/solver/time_step.hpp"

namespace hystflow {

struct Trajectory {
    std::vector<StepDiagnostics> diagnostics;  // index 0 is the initial state
    SimulationState final_state;
};

/// Called after every accepted step (and once for the initial state).
using StepObserver = std::function<void(const SimulationState&)>;

/// L-infinity bound and discrete energy inequality for the step just taken.
inline void check_step_invariants(const Model& model, const StepDiagnostics& prev, const StepDiagnostics& cur,
                                  double tau, const SolverOptions& opt) {
    if (cur.max_abs_u > model.lambda_max + opt.linf_tol)
        throw InvariantViolation("max |u| = " + std::to_string(cur.max_abs_u) + " exceeds Lambda = "
                                     + std::to_string(model.lambda_max),
                                 cur.step);
    const double kappa_lo = model.kappa_bounds().first;
    const double balance = (cur.energy - prev.energy) / tau + kappa_lo * cur.gradient_p_norm;
    if (balance > opt.energy_tol)
        throw InvariantViolation("energy inequality violated by " + std::to_string(balance), cur.step);
}

/// (E_i - E_{i-1}) / tau + kappa_* sum |grad u_i|^p
inline double energy_balance(const Model& model, const StepDiagnostics& prev, const StepDiagnostics& cur, double tau) {
    return (cur.energy - prev.energy) / tau + model.kappa_bounds().first * cur.gradient_p_norm;
}

inline Trajectory run_simulation(const SimulationState& initial, double tau, std::size_t n_steps, const Model& model,
                                 const SolverOptions& opt = {}, const StepObserver& observer = {}) {
    if (!(tau > 0.0)) throw DomainError("run_simulation: tau must be > 0");
    Trajectory out;
    out.diagnostics.reserve(n_steps + 1);
    out.diagnostics.push_back(initial.diagnostics);
    if (observer) observer(initial);
    SimulationState s = initial;
    for (std::size_t i = 0; i < n_steps; ++i) {
        SimulationState next = time_step(s, tau, model, opt);
        if (opt.check_invariants) check_step_invariants(model, s.diagnostics, next.diagnostics, tau, opt);
        out.diagnostics.push_back(next.diagnostics);
        if (observer) observer(next);
        s = std::move(next);
    }
    out.final_state = std::move(s);
    return out;
}

}  // namespace hystflow
