#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hystflow/errors.hpp"
#include "hystflow/hysteresis/preisach.hpp"
#include "hystflow/series.hpp"

namespace hystflow {

struct LoopOptions {
    double lambda_max = 1.0;
    std::size_t points_per_leg = 200;
    std::optional<MemoryCurve> initial;  // virgin when absent
    std::size_t limit_points = 201;
};

struct LoopTrace {
    Series trace{{"u", "theta"}};
    std::vector<double> vertex_theta;  // theta after each path value
    Series limits{{"u", "limit_wetting", "limit_drying"}};
    Series primary{{"u", "primary_wetting"}};  // from virgin, u in [0, Lambda]
};

/// Drives one material point from its initial memory through the path
/// values, linearly between consecutive values.
inline LoopTrace loop_experiment(const PreisachDensity& density, std::span<const double> path,
                                 const LoopOptions& opt = {}) {
    const double U = opt.lambda_max;
    if (!(U > 0.0)) throw DomainError("loop experiment: lambda_max must be > 0");
    if (opt.points_per_leg < 1) throw DomainError("loop experiment: need at least one point per leg");
    for (double v : path)
        if (!(std::abs(v) <= U)) throw DomainError("loop experiment: path value outside [-Lambda, Lambda]");

    LoopTrace out;
    MemoryCurve m = opt.initial.value_or(MemoryCurve(U));
    double u = m.input();
    out.trace.push({u, preisach_output(m, density)});
    for (double target : path) {
        if (target != u) {
            const double from = u;
            for (std::size_t k = 1; k <= opt.points_per_leg; ++k) {
                const double s = static_cast<double>(k) / static_cast<double>(opt.points_per_leg);
                u = k == opt.points_per_leg ? target : from + s * (target - from);
                m = memory_update(m, u);
                out.trace.push({u, preisach_output(m, density)});
            }
        }
        out.vertex_theta.push_back(preisach_output(m, density));
    }

    const std::size_t n = std::max<std::size_t>(opt.limit_points, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = -U + 2.0 * U * static_cast<double>(i) / static_cast<double>(n - 1);
        out.limits.push({v, limit_wetting(density, v, U), limit_drying(density, v, U)});
        const double w = U * static_cast<double>(i) / static_cast<double>(n - 1);
        out.primary.push({w, primary_wetting(density, w)});
    }
    return out;
}

}  // namespace hystflow
