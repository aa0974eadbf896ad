#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hystflow/experiments/scenario.hpp"
#include "hystflow/series.hpp"
#include "hystflow/wave/wave_integral.hpp"

namespace hystflow {

struct RegimeRow {
    double p = 0.0;
    WaveIntegral F;
    bool slow = false;  // compact supports stay bounded
    std::string classification;
    std::string note;
};

/// slow/bounded iff the wave integral F(Lambda) is finite. The note compares
/// p - 1 with the exponent m = 2 of the |u| u time nonlinearity that the
/// hysteresis behaves like near u = 0.
inline std::vector<RegimeRow> regime_classification(std::span<const double> p_list, const PreisachDensity& density,
                                                    double Lambda = 1.0) {
    std::vector<RegimeRow> rows;
    rows.reserve(p_list.size());
    for (double p : p_list) {
        RegimeRow row;
        row.p = p;
        row.F = wave_integral_F(density, p, Lambda);
        row.slow = row.F.is_finite();
        row.classification = row.slow ? "slow/bounded" : "fast/unbounded";
        const double pm1 = p - 1.0;
        row.note = detail::cat("p-1 = ", pm1, pm1 > 2.0 ? " > " : (pm1 < 2.0 ? " < " : " = "), "m = 2: ",
                               pm1 > 2.0 ? "slow diffusion, travelling wave exists"
                                         : (pm1 < 2.0 ? "fast diffusion, no travelling wave"
                                                      : "critical case, no travelling wave"));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Support radius over time for one run; descriptive only, used for the
/// p <= 3 entries where nothing is asserted.
inline Series support_growth(const SimulationSetup& setup) {
    const Model model = make_model(setup);
    Series out({"t", "R_supp"});
    run_simulation(make_initial(setup, model), setup.tau, setup.steps, model, setup.solver,
                   [&](const SimulationState& s) { out.push({s.time, s.diagnostics.support_radius}); });
    return out;
}

}  // namespace hystflow
