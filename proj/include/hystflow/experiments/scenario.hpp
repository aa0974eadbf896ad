#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hystflow/errors.hpp"
#include "hystflow/solver/run.hpp"

namespace hystflow {

/// Initial pressure: zero, a bump Lambda (1 - (|x|/R0)^2)^+, or a tabulated
/// profile (x, u) interpolated linearly in |x| for radial geometry and in x
/// otherwise, or nodal values given directly. Memories are built from u0 in
/// the given mode unless explicit ones are supplied (restart).
struct InitialSpec {
    enum class Kind { zero, bump, table, nodal };
    Kind kind = Kind::zero;
    double R0 = 1.0;
    double amplitude = 1.0;
    double scale = 1.0;  // multiplies the profile, result capped at lambda_max
    std::vector<double> table_x, table_u;
    InitialMemoryMode memory = InitialMemoryMode::wedge;
    std::optional<std::vector<MemoryCurve>> memories;
};

inline const char* to_string(InitialSpec::Kind k) {
    switch (k) {
    case InitialSpec::Kind::zero: return "zero";
    case InitialSpec::Kind::bump: return "bump";
    case InitialSpec::Kind::table: return "table";
    case InitialSpec::Kind::nodal: return "nodal";
    }
    return "?";
}

/// Everything needed to build a model and its initial state.
struct SimulationSetup {
    Geometry geometry{GeometryKind::interval, 6.0, 1, 601};
    PreisachDensity density = PreisachDensity::constant(2.0);
    Permeability permeability = Permeability::constant(1.0);
    double omega = 0.0;
    double p = 4.0;
    double lambda_max = 1.0;
    double tau = 1e-3;
    std::size_t steps = 2000;
    SolverOptions solver;
    InitialSpec initial;
};

inline Model make_model(const SimulationSetup& s) {
    return Model(Mesh(s.geometry), s.density, s.permeability, BoundaryCondition(s.omega), s.p, s.lambda_max);
}

inline double interpolate_table(const std::vector<double>& xs, const std::vector<double>& us, double x) {
    if (xs.empty() || xs.size() != us.size()) throw DomainError("initial table: x and u columns differ in length");
    if (x <= xs.front()) return us.front();
    if (x >= xs.back()) return us.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto i = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return (1 - w) * us[i] + w * us[i + 1];
}

inline SimulationState make_initial(const SimulationSetup& s, const Model& model) {
    const auto& init = s.initial;
    std::vector<double> u(model.mesh.size(), 0.0);
    switch (init.kind) {
    case InitialSpec::Kind::zero: break;
    case InitialSpec::Kind::bump: {
        if (!(init.R0 > 0.0)) throw DomainError("bump: R0 must be > 0");
        const auto b = bump_profile(init.R0, init.amplitude);
        for (std::size_t j = 0; j < u.size(); ++j) u[j] = b(model.mesh.x(j));
        break;
    }
    case InitialSpec::Kind::table:
        for (std::size_t i = 1; i < init.table_x.size(); ++i)
            if (!(init.table_x[i] > init.table_x[i - 1])) throw DomainError("initial table: x must increase");
        for (std::size_t j = 0; j < u.size(); ++j) {
            const double x = s.geometry.kind == GeometryKind::radial ? model.mesh.radius(j) : model.mesh.x(j);
            u[j] = interpolate_table(init.table_x, init.table_u, x);
        }
        break;
    case InitialSpec::Kind::nodal:
        if (init.table_u.size() != u.size())
            throw DomainError("initial state: " + std::to_string(init.table_u.size()) + " nodal values for a mesh of "
                              + std::to_string(u.size()));
        u = init.table_u;
        break;
    }
    for (double& v : u) {
        v *= init.scale;
        v = std::clamp(v, -model.lambda_max, model.lambda_max);
    }
    if (init.memories) return make_state(model, std::move(u), *init.memories, s.solver);
    std::vector<MemoryCurve> mem;
    mem.reserve(u.size());
    for (double v : u) mem.push_back(make_initial_memory(v, model.lambda_max, init.memory));
    return make_state(model, std::move(u), std::move(mem), s.solver);
}

}  // namespace hystflow
