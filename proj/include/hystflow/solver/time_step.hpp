#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "hystflow/errors.hpp"
#include "hystflow/hysteresis/preisach.hpp"
#include "hystflow/numerics/roots.hpp"
#include "hystflow/numerics/tridiagonal.hpp"
#include "hystflow/solver/state.hpp"

namespace hystflow {

namespace detail {

inline double pflux(double s, double p) { return std::pow(std::abs(s), p - 2.0) * s; }
inline double pflux_slope(double s, double p) { return (p - 1.0) * std::pow(std::abs(s), p - 2.0); }

/// Nodal residuals of one implicit step,
///   F_j = V_j (theta_j(u_j) - theta_j^old)
///         - tau (A+ kappa+ g(D+) - A- kappa- g(D-)) + tau gamma A_b u_j,
/// with g(s) = |s|^{p-2} s, two-point gradients and arithmetic-mean kappa.
class StepSystem {
  public:
    StepSystem(const Model& model, const SimulationState& old, double tau)
        : model_(model), old_(old), tau_(tau), n_(model.mesh.size()) {
        theta_.resize(n_);
        increment_.resize(n_);
        dtheta_.resize(n_);
        kappa_.resize(n_);
        dkappa_.resize(n_);
        F_.resize(n_);
        boundary_gamma_area_.assign(n_, 0.0);
        fixed_.assign(n_, false);
        const auto& bnodes = model.mesh.boundary_nodes();
        for (std::size_t k = 0; k < bnodes.size(); ++k) {
            if (model.bc.dirichlet()) fixed_[bnodes[k]] = true;
            if (model.bc.robin()) boundary_gamma_area_[bnodes[k]] = model.bc.gamma() * model.mesh.boundary_area(k);
        }
    }

    std::size_t size() const noexcept { return n_; }
    bool fixed(std::size_t j) const { return fixed_[j]; }
    const std::vector<double>& F() const noexcept { return F_; }
    const std::vector<double>& theta() const noexcept { return theta_; }

    void update_node(const std::vector<double>& u, std::size_t j) {
        const auto b = branch_increment(old_.memories[j], u[j], model_.density);
        increment_[j] = b.delta_theta;
        theta_[j] = old_.theta[j] + b.delta_theta;
        dtheta_[j] = b.slope;
        const double x = model_.mesh.x(j);
        kappa_[j] = model_.permeability(x, theta_[j]);
        dkappa_[j] = model_.permeability.d_theta(x, theta_[j]) * b.slope;
    }

    double face_flux(const std::vector<double>& u, std::size_t f) const {
        const double D = (u[f + 1] - u[f]) / model_.mesh.dx();
        return model_.mesh.face_area(f) * 0.5 * (kappa_[f] + kappa_[f + 1]) * pflux(D, model_.p);
    }

    double node_residual(const std::vector<double>& u, std::size_t j) const {
        if (fixed_[j]) return 0.0;
        double r = model_.mesh.volume(j) * increment_[j] + tau_ * boundary_gamma_area_[j] * u[j];
        if (j + 1 < n_) r -= tau_ * face_flux(u, j);
        if (j > 0) r += tau_ * face_flux(u, j - 1);
        return r;
    }

    /// Fills F and returns max_j |F_j| / V_j.
    double evaluate(const std::vector<double>& u) {
        for (std::size_t j = 0; j < n_; ++j) update_node(u, j);
        double worst = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            F_[j] = node_residual(u, j);
            worst = std::max(worst, std::abs(F_[j]) / model_.mesh.volume(j));
        }
        return worst;
    }

    double merit() const {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s += F_[j] * F_[j] / model_.mesh.volume(j);
        return 0.5 * s;
    }

    /// Tridiagonal Jacobian at the last evaluated point, plus mu V_j on the
    /// diagonal.
    void jacobian(const std::vector<double>& u, double mu, std::vector<double>& lower, std::vector<double>& diag,
                  std::vector<double>& upper) const {
        const double dx = model_.mesh.dx();
        const double p = model_.p;
        for (std::size_t j = 0; j < n_; ++j) {
            lower[j] = upper[j] = 0.0;
            if (fixed_[j]) {
                diag[j] = 1.0;
                continue;
            }
            const double V = model_.mesh.volume(j);
            diag[j] = V * dtheta_[j] + tau_ * boundary_gamma_area_[j] + mu * V;
            if (j + 1 < n_) {
                const double A = model_.mesh.face_area(j);
                const double D = (u[j + 1] - u[j]) / dx;
                const double k = 0.5 * (kappa_[j] + kappa_[j + 1]);
                const double gs = pflux_slope(D, p) / dx;
                const double g = pflux(D, p);
                diag[j] += tau_ * A * (k * gs - 0.5 * dkappa_[j] * g);
                if (!fixed_[j + 1]) upper[j] = -tau_ * A * (k * gs + 0.5 * dkappa_[j + 1] * g);
            }
            if (j > 0) {
                const double A = model_.mesh.face_area(j - 1);
                const double D = (u[j] - u[j - 1]) / dx;
                const double k = 0.5 * (kappa_[j - 1] + kappa_[j]);
                const double gs = pflux_slope(D, p) / dx;
                const double g = pflux(D, p);
                diag[j] += tau_ * A * (k * gs + 0.5 * dkappa_[j] * g);
                if (!fixed_[j - 1]) lower[j] = -tau_ * A * (k * gs - 0.5 * dkappa_[j - 1] * g);
            }
        }
    }

  private:
    const Model& model_;
    const SimulationState& old_;
    double tau_;
    std::size_t n_;
    std::vector<double> theta_, increment_, dtheta_, kappa_, dkappa_, F_, boundary_gamma_area_;
    std::vector<bool> fixed_;
};

/// Solves nodal equation j exactly for fixed neighbours. Where the root is
/// an interval, the endpoint closest to the previous time value is taken.
inline double solve_node(StepSystem& sys, std::vector<double>& u, const std::vector<double>& u_old, std::size_t j) {
    auto f = [&](double v) {
        u[j] = v;
        sys.update_node(u, j);
        if (j > 0) sys.update_node(u, j - 1);
        if (j + 1 < sys.size()) sys.update_node(u, j + 1);
        return sys.node_residual(u, j);
    };
    const double before = u[j];
    const double root = numerics::monotone_root_nearest(f, u_old[j], 0.0, 1e-3);
    f(root);
    return std::abs(root - before);
}

/// Symmetric nonlinear Gauss-Seidel (forward, then backward) over the given
/// nodes, all when empty; returns the largest change.
inline double gauss_seidel_sweep(StepSystem& sys, std::vector<double>& u, const std::vector<double>& u_old,
                                 const std::vector<std::size_t>& nodes = {}) {
    double change = 0.0;
    auto visit = [&](std::size_t j) {
        if (!sys.fixed(j)) change = std::max(change, solve_node(sys, u, u_old, j));
    };
    if (nodes.empty()) {
        for (std::size_t j = 0; j < sys.size(); ++j) visit(j);
        for (std::size_t j = sys.size(); j-- > 0;) visit(j);
    } else {
        for (std::size_t j : nodes) visit(j);
        for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) visit(*it);
    }
    return change;
}

/// True when the largest scaled residual sits at a node still at its old
/// value: Newton cannot reach it, it is behind a dry stretch.
inline bool worst_node_untouched(const StepSystem& sys, const std::vector<double>& u, const std::vector<double>& u_old,
                                 const Mesh& mesh) {
    std::size_t worst = 0;
    double w = -1.0;
    for (std::size_t j = 0; j < sys.size(); ++j) {
        const double f = std::abs(sys.F()[j]) / mesh.volume(j);
        if (f > w) {
            w = f;
            worst = j;
        }
    }
    return u[worst] == u_old[worst];
}

/// Forward then backward pass solving only nodes whose residual exceeds tol
/// when reached. Carries wetting across dry regions, where the Newton
/// matrix has empty rows and advances one node per iteration.
inline void residual_sweep(StepSystem& sys, std::vector<double>& u, const std::vector<double>& u_old,
                           const Mesh& mesh, double tol) {
    const std::size_t n = sys.size();
    auto visit = [&](std::size_t j) {
        if (!sys.fixed(j) && std::abs(sys.node_residual(u, j)) > tol * mesh.volume(j)) solve_node(sys, u, u_old, j);
    };
    for (std::size_t j = 0; j < n; ++j) visit(j);
    for (std::size_t j = n; j-- > 0;) visit(j);
}

}  // namespace detail

/// One implicit step: solve the nodal system for u at t + tau, then update
/// the memories and the cached saturation.
///
/// Damped Newton with tridiagonal solves, a Levenberg shift mu V_j that keeps
/// rows regular at turning points (where d theta / du vanishes), and Armijo
/// backtracking on 0.5 sum F_j^2 / V_j. Falls back to nonlinear Gauss-Seidel
/// sweeps when Newton stalls, and to residual-driven sweeps when the worst
/// node has not moved.
///
/// A small residual alone is not enough: next to a turning point the nodal
/// equation is flat (theta - theta_old ~ u^2) and a residual of 1e-13 still
/// allows errors near 3e-7 in u. Nodes whose last Newton update exceeds
/// step_tol are finished by exact nodal solves.
inline SimulationState time_step(const SimulationState& state, double tau, const Model& model,
                                 const SolverOptions& opt = {}) {
    if (!(tau > 0.0)) throw DomainError("time_step: tau must be > 0");
    const std::size_t n = model.mesh.size();
    detail::StepSystem sys(model, state, tau);

    std::vector<double> u = state.u;
    for (std::size_t j = 0; j < n; ++j)
        if (sys.fixed(j)) u[j] = 0.0;

    std::vector<double> lower(n), diag(n), upper(n), rhs(n), delta(n), trial(n), step(n, 0.0);
    double res = sys.evaluate(u);
    double mu = 1e-12;
    int it = 0;
    double last_step = kInf;
    // a few Newton steps past the residual tolerance settle the smooth nodes
    // to step_tol; only the flat ones are left for the nodal solves below
    const double eps = opt.step_tol * model.lambda_max;
    int extra = 0;
    for (; (res > opt.tol || (last_step > eps && extra++ < 4)) && it < opt.max_iters; ++it) {
        const double phi = sys.merit();
        sys.jacobian(u, mu, lower, diag, upper);
        for (std::size_t j = 0; j < n; ++j) rhs[j] = -sys.F()[j];
        numerics::solve_tridiagonal(lower, diag, upper, rhs, delta);

        double lambda = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 12; ++bt, lambda *= 0.5) {
            for (std::size_t j = 0; j < n; ++j) trial[j] = u[j] + lambda * delta[j];
            const double r = sys.evaluate(trial);
            if (sys.merit() <= (1.0 - 1e-4 * lambda) * phi || r <= opt.tol) {
                last_step = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    step[j] = std::abs(trial[j] - u[j]);
                    last_step = std::max(last_step, step[j]);
                }
                u.swap(trial);
                if (r > opt.tol && detail::worst_node_untouched(sys, u, state.u, model.mesh)) {
                    detail::residual_sweep(sys, u, state.u, model.mesh, opt.tol);
                    res = sys.evaluate(u);
                } else {
                    res = r;
                }
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            sys.evaluate(u);
            if (res <= opt.tol) break;
            mu = std::max(mu * 100.0, 1e-8);
            if (mu > 1e8) break;
            continue;
        }
        mu = std::max(mu * 0.1, 1e-12);
    }
    bool converged = res <= opt.tol && last_step <= eps;

    // Newton is only linear at flat nodes; finish those few by exact nodal
    // solves.
    if (!converged && res <= opt.tol) {
        std::vector<std::size_t> band;
        for (std::size_t j = 0; j < n; ++j)
            if ((step[j] > eps) || (j > 0 && step[j - 1] > eps) || (j + 1 < n && step[j + 1] > eps)) band.push_back(j);
        for (int sweep = 0; sweep < opt.polish_sweeps; ++sweep) {
            ++it;
            if (detail::gauss_seidel_sweep(sys, u, state.u, band) <= eps) break;
        }
        res = sys.evaluate(u);
        converged = res <= opt.tol;
    }
    if (!converged) {
        for (int sweep = 0; sweep < opt.polish_sweeps && res > opt.tol; ++sweep) {
            detail::gauss_seidel_sweep(sys, u, state.u);
            res = sys.evaluate(u);
            ++it;
        }
        if (res > opt.tol) {
            std::ostringstream msg;
            msg << "time_step: residual " << std::scientific << std::setprecision(3) << res << " above tolerance "
                << opt.tol << " at step " << state.step + 1;
            throw NonConvergence(msg.str(), res, it);
        }
    }

    SimulationState next;
    next.step = state.step + 1;
    next.time = state.time + tau;
    next.tau = tau;
    next.u = std::move(u);
    next.memories.reserve(n);
    next.theta.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        next.memories.push_back(memory_update(state.memories[j], next.u[j]));
        next.theta[j] = preisach_output(next.memories[j], model.density);
    }
    next.diagnostics.inner_iterations = it;
    next.diagnostics.residual = res;
    next.diagnostics = compute_diagnostics(model, next, opt);
    return next;
}

}  // namespace hystflow
