#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "hystflow/errors.hpp"
#include "hystflow/hysteresis/density.hpp"
#include "hystflow/hysteresis/memory_curve.hpp"
#include "hystflow/hysteresis/preisach.hpp"
#include "hystflow/solver/geometry.hpp"
#include "hystflow/solver/permeability.hpp"
#include "hystflow/wave/profile.hpp"

namespace hystflow {

/// Everything that defines the continuous problem on a mesh.
struct Model {
    Mesh mesh;
    PreisachDensity density;
    Permeability permeability;
    BoundaryCondition bc;
    double p = 4.0;
    double lambda_max = 1.0;

    Model(Mesh m, PreisachDensity d, Permeability k, BoundaryCondition b, double p_, double lambda)
        : mesh(std::move(m)), density(std::move(d)), permeability(std::move(k)), bc(b), p(p_), lambda_max(lambda) {
        if (!(p > 2.0)) throw UnsupportedExponent("model: flux exponent must be > 2");
        if (!(lambda_max > 0.0)) throw DomainError("model: lambda_max must be > 0");
    }

    /// Saturation range reachable from memories bounded by the wedge.
    std::pair<double, double> theta_range() const {
        const MemoryCurve virgin(lambda_max);
        return {preisach_output(memory_update(virgin, -lambda_max), density),
                preisach_output(memory_update(virgin, lambda_max), density)};
    }

    std::pair<double, double> kappa_bounds() const {
        const auto [lo, hi] = theta_range();
        return permeability.bounds(lo, hi);
    }
};

struct SolverOptions {
    double tol = 1e-13;           // max_j |F_j| / V_j, in saturation units
    double step_tol = 1e-13;      // last Newton update, times lambda_max
    int max_iters = 200;          // Newton iterations per step
    int polish_sweeps = 400;      // nonlinear Gauss-Seidel fallback
    double energy_tol = 1e-7;
    double linf_tol = 1e-12;
    double support_threshold = 1e-9;  // times lambda_max
    bool check_invariants = true;
};

struct StepDiagnostics {
    std::size_t step = 0;
    double time = 0.0;
    double energy = 0.0;
    double mass = 0.0;
    double gradient_p_norm = 0.0;  // sum over faces of A dx |D u|^p
    double support_radius = 0.0;
    double max_abs_u = 0.0;
    int inner_iterations = 0;
    double residual = 0.0;
};

struct SimulationState {
    std::size_t step = 0;
    double time = 0.0;
    double tau = 0.0;
    std::vector<double> u;
    std::vector<double> theta;
    std::vector<MemoryCurve> memories;
    StepDiagnostics diagnostics;
};

/// Largest |x_j| with |u_j| > threshold, 0 if none.
inline double support_radius(const Mesh& mesh, const std::vector<double>& u, double threshold) {
    if (!(threshold > 0.0)) throw DomainError("support_radius: threshold must be > 0");
    double r = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j)
        if (std::abs(u[j]) > threshold) r = std::max(r, mesh.radius(j));
    return r;
}

inline double gradient_p_norm(const Mesh& mesh, const std::vector<double>& u, double p) {
    double s = 0.0;
    for (std::size_t f = 0; f < mesh.face_count(); ++f)
        s += mesh.face_area(f) * mesh.dx() * std::pow(std::abs((u[f + 1] - u[f]) / mesh.dx()), p);
    return s;
}

inline double total_energy(const Model& model, const std::vector<MemoryCurve>& memories) {
    double e = 0.0;
    for (std::size_t j = 0; j < memories.size(); ++j)
        e += model.mesh.volume(j) * memory_energy(memories[j], model.density);
    return e;
}

inline double total_mass(const Mesh& mesh, const std::vector<double>& theta) {
    double m = 0.0;
    for (std::size_t j = 0; j < theta.size(); ++j) m += mesh.volume(j) * theta[j];
    return m;
}

inline StepDiagnostics compute_diagnostics(const Model& model, const SimulationState& s, const SolverOptions& opt) {
    StepDiagnostics d = s.diagnostics;
    d.step = s.step;
    d.time = s.time;
    d.energy = total_energy(model, s.memories);
    d.mass = total_mass(model.mesh, s.theta);
    d.gradient_p_norm = gradient_p_norm(model.mesh, s.u, model.p);
    d.support_radius = support_radius(model.mesh, s.u, opt.support_threshold * model.lambda_max);
    d.max_abs_u = 0.0;
    for (double v : s.u) d.max_abs_u = std::max(d.max_abs_u, std::abs(v));
    return d;
}

/// State at t = 0 from nodal u0 and memories.
inline SimulationState make_state(const Model& model, std::vector<double> u0, std::vector<MemoryCurve> memories,
                                  const SolverOptions& opt = {}) {
    if (u0.size() != model.mesh.size() || memories.size() != model.mesh.size())
        throw DomainError("initial state: field sizes do not match the mesh");
    SimulationState s;
    s.u = std::move(u0);
    s.memories = std::move(memories);
    s.theta.resize(s.u.size());
    for (std::size_t j = 0; j < s.u.size(); ++j) s.theta[j] = preisach_output(s.memories[j], model.density);
    s.diagnostics = compute_diagnostics(model, s, opt);
    return s;
}

/// State at t = 0 from a pressure profile u0(x) with memories built per node.
inline SimulationState make_initial_state(const Model& model, const std::function<double(double)>& u0,
                                          InitialMemoryMode mode, const SolverOptions& opt = {}) {
    std::vector<double> u(model.mesh.size());
    std::vector<MemoryCurve> mem;
    mem.reserve(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
        u[j] = u0(model.mesh.x(j));
        mem.push_back(make_initial_memory(u[j], model.lambda_max, mode));
    }
    return make_state(model, std::move(u), std::move(mem), opt);
}

/// u0(x) = Lambda (1 - (|x| / R0)^2)^+
inline std::function<double(double)> bump_profile(double R0, double lambda) {
    if (!(R0 > 0.0)) throw DomainError("bump: R0 must be > 0");
    return [R0, lambda](double x) {
        const double s = x / R0;
        return s * s < 1.0 ? lambda * (1.0 - s * s) : 0.0;
    };
}

/// max_j |u_j| - U_c(c t + R - |x_j|); nonpositive when the wave dominates.
inline double comparison_check(const Mesh& mesh, const std::vector<double>& u, double t, double R,
                               const WaveProfile& profile) {
    double worst = -kInf;
    for (std::size_t j = 0; j < u.size(); ++j)
        worst = std::max(worst, std::abs(u[j]) - profile(profile.c() * t + R - mesh.radius(j)));
    return worst;
}

}  // namespace hystflow
