#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "hystflow/hysteresis/validate.hpp"
#include "hystflow/report.hpp"
#include "hystflow/solver/state.hpp"
#include "hystflow/solver/time_step.hpp"

namespace hystflow {

struct InitialStateCheckOptions {
    bool front_experiment = false;  // support and wedge checks become hard failures
    double R0 = 0.0;                // support radius of the initial data; <= 0 skips the support check
    double tol = 1e-12;
    double div_tol = 1e-9;  // |div| below this counts as zero in the sign condition
};

/// Discrete div(kappa |grad u|^{p-2} grad u) per node; zero-flux closure
/// beyond the outer nodes.
inline std::vector<double> discrete_flux_divergence(const Model& model, const std::vector<double>& u,
                                                    const std::vector<double>& theta) {
    const auto& mesh = model.mesh;
    const std::size_t n = mesh.size();
    std::vector<double> flux(mesh.face_count());
    for (std::size_t f = 0; f < flux.size(); ++f) {
        const double D = (u[f + 1] - u[f]) / mesh.dx();
        const double k = 0.5 * (model.permeability(mesh.x(f), theta[f]) + model.permeability(mesh.x(f + 1), theta[f + 1]));
        flux[f] = mesh.face_area(f) * k * detail::pflux(D, model.p);
    }
    std::vector<double> div(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        if (j + 1 < n) s += flux[j];
        if (j > 0) s -= flux[j - 1];
        div[j] = s / mesh.volume(j);
    }
    return div;
}

/// Compatibility of (u0, memories) with the model: memory anchored at u0,
/// boundary condition, support and wedge bounds, and the sign condition
/// linking the memory slope at r = 0 to the initial flux divergence.
inline ValidationReport validate_initial_state(const Model& model, const SimulationState& state,
                                               const InitialStateCheckOptions& opt = {}) {
    ValidationReport report;
    const auto& mesh = model.mesh;
    const std::size_t n = mesh.size();
    const double Lam = model.lambda_max;
    if (state.u.size() != n || state.memories.size() != n || state.theta.size() != n) {
        report.add("field sizes match the mesh", CheckStatus::fail,
                   detail::cat("mesh has ", n, " nodes, u has ", state.u.size(), ", memories ", state.memories.size()));
        return report;
    }

    {
        std::string witness;
        for (std::size_t j = 0; j < n && witness.empty(); ++j)
            if (std::abs(state.memories[j].input() - state.u[j]) > opt.tol)
                witness = detail::cat("node ", j, " (x = ", mesh.x(j), "): memory(0) = ", state.memories[j].input(),
                                      ", u0 = ", state.u[j]);
        report.add("memory anchored at u0", witness.empty() ? CheckStatus::pass : CheckStatus::fail, witness);
    }

    {
        std::string witness;
        for (std::size_t j = 0; j < n && witness.empty(); ++j)
            if (!(std::abs(state.u[j]) <= Lam + opt.tol))
                witness = detail::cat("node ", j, ": |u0| = ", std::abs(state.u[j]), " > Lambda = ", Lam);
        report.add("|u0| <= Lambda", witness.empty() ? CheckStatus::pass : CheckStatus::fail, witness);
    }

    {
        std::string witness;
        for (std::size_t j = 0; j < n && witness.empty(); ++j) {
            const auto& m = state.memories[j];
            // piecewise linear: xi(Lambda) and the corners past it decide
            if (std::abs(m(Lam)) > opt.tol)
                witness = detail::cat("node ", j, ": xi(", Lam, ") = ", m(Lam), " at Lambda");
            for (const auto& c : m.corners())
                if (witness.empty() && c.r >= Lam && std::abs(c.xi) > opt.tol)
                    witness = detail::cat("node ", j, ": xi(", c.r, ") = ", c.xi, " beyond Lambda");
        }
        report.add("memory vanishes for r >= Lambda", witness.empty() ? CheckStatus::pass : CheckStatus::fail, witness);
    }

    // omega kappa |u'|^{p-2} u' n + (1 - omega) u0 = 0 with one-sided gradients
    {
        std::string witness;
        const auto& bnodes = mesh.boundary_nodes();
        for (std::size_t k = 0; k < bnodes.size() && witness.empty(); ++k) {
            const std::size_t j = bnodes[k];
            const std::size_t nb = j == 0 ? 1 : j - 1;
            const double dudn = (state.u[j] - state.u[nb]) / mesh.dx();  // outward derivative
            const double kap = model.permeability(mesh.x(j), state.theta[j]);
            const double w = model.bc.omega;
            const double lhs = w * kap * detail::pflux(dudn, model.p) + (1.0 - w) * state.u[j];
            if (std::abs(lhs) > 1e-10)
                witness = detail::cat("node ", j, " (x = ", mesh.x(j), "): residual ", lhs, " with omega = ", w);
        }
        report.add("boundary compatibility", witness.empty() ? CheckStatus::pass : CheckStatus::fail, witness);
    }

    const CheckStatus hard = opt.front_experiment ? CheckStatus::fail : CheckStatus::warn;
    if (opt.R0 > 0.0) {
        std::string witness;
        for (std::size_t j = 0; j < n && witness.empty(); ++j) {
            if (mesh.radius(j) < opt.R0) continue;
            double worst = std::abs(state.u[j]);
            for (const auto& c : state.memories[j].corners()) worst = std::max(worst, std::abs(c.xi));
            if (worst > opt.tol)
                witness = detail::cat("node ", j, " (|x| = ", mesh.radius(j), " >= R0 = ", opt.R0, "): value ", worst);
        }
        report.add("initial data supported in |x| < R0", witness.empty() ? CheckStatus::pass : hard, witness);
        const double extent = mesh.geometry().L;
        report.add("R0 inside the domain", opt.R0 < extent ? CheckStatus::pass : hard,
                   detail::cat("R0 = ", opt.R0, ", extent = ", extent));
    } else if (opt.front_experiment) {
        report.add("initial data supported in |x| < R0", CheckStatus::fail, "front experiment needs R0 > 0");
    }

    // lambda(x, r) <= (Lambda - r)^+; checking the corners and r = Lambda suffices
    {
        std::string witness;
        for (std::size_t j = 0; j < n && witness.empty(); ++j) {
            const auto& m = state.memories[j];
            auto over = [&](double r) { return m(r) - std::max(Lam - r, 0.0); };
            double worst = over(Lam);
            double at = Lam;
            for (const auto& c : m.corners())
                if (over(c.r) > worst) {
                    worst = over(c.r);
                    at = c.r;
                }
            if (worst > opt.tol) witness = detail::cat("node ", j, ": xi(", at, ") exceeds the wedge by ", worst);
        }
        report.add("memory below wedge (Lambda - r)^+", witness.empty() ? CheckStatus::pass : hard, witness);
    }

    // -d lambda / dr at r = 0+ must lie in sign(div flux)
    {
        const auto div = discrete_flux_divergence(model, state.u, state.theta);
        std::size_t bad = 0;
        std::string witness;
        for (std::size_t j = 0; j < n; ++j) {
            if (mesh.is_boundary(j) && !model.bc.neumann()) continue;
            if (std::abs(div[j]) <= opt.div_tol) continue;
            const auto& m = state.memories[j];
            const double slope = m.segment_count() > 0 ? m.segment(0).slope() : 0.0;
            const double want = div[j] > 0.0 ? -1.0 : 1.0;
            if (std::abs(slope - want) > 1e-9) {
                if (witness.empty())
                    witness = detail::cat("node ", j, " (x = ", mesh.x(j), "): div = ", div[j], ", memory slope at 0 is ",
                                          slope, ", expected ", want);
                ++bad;
            }
        }
        if (bad > 1) witness += detail::cat(" (", bad, " nodes)");
        report.add("memory slope sign condition", bad == 0 ? CheckStatus::pass_sampled : CheckStatus::warn, witness);
    }
    return report;
}

}  // namespace hystflow
