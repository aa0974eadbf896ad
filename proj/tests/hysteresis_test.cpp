#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hystflow/hysteresis/density.hpp"
#include "hystflow/hysteresis/memory_curve.hpp"
#include "hystflow/hysteresis/preisach.hpp"
#include "hystflow/hysteresis/validate.hpp"
#include "oracles.hpp"

using namespace hystflow;

namespace {

PreisachDensity rho2(double gbar = 0.0) { return PreisachDensity::constant(2.0, gbar); }

PreisachDensity separable() {
    return PreisachDensity(SeparableDensity{1.5, 0.7, 0.4, 2.0, 1.5}, 0.1);
}

PreisachDensity grid() {
    std::vector<double> values;
    const std::size_t nr = 9, nv = 13;
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t k = 0; k < nv; ++k)
            values.push_back(1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i)) * std::cos(0.3 * static_cast<double>(k)));
    return PreisachDensity(GridDensity(2.0, 1.5, nr, nv, values), 0.2);
}

void expect_curve_matches_grid(const MemoryCurve& c, const oracle::RGridMemory& g, double tol) {
    for (std::size_t i = 0; i < g.r().size(); ++i) ASSERT_NEAR(c(g.r()[i]), g.xi()[i], tol) << "r = " << g.r()[i];
}

}  // namespace

// ---- play_update ---------------------------------------------------------

TEST(PlayUpdate, ExamplesAgainstVariationalInequality) {
    EXPECT_EQ(play_update(0.0, 2.0, 1.0), 1.0);
    EXPECT_TRUE(oracle::play_vi_holds(0.0, 2.0, 1.0, 1.0, 1e-3));
    EXPECT_EQ(play_update(0.5, 0.7, 1.0), 0.5);
    EXPECT_EQ(play_update(1.0, -2.0, 1.0), -1.0);
    EXPECT_TRUE(oracle::play_vi_holds(1.0, -2.0, 1.0, -1.0, 1e-3));
    // a wrong answer is rejected by the oracle
    EXPECT_FALSE(oracle::play_vi_holds(0.0, 2.0, 1.0, 1.5, 1e-3));
}

TEST(PlayUpdate, NegativeThresholdRejected) { EXPECT_THROW(play_update(0.0, 1.0, -0.1), InvalidThreshold); }

TEST(PlayUpdate, DiscreteLipschitzBound) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> U(-2.0, 2.0), R(0.0, 1.5);
    for (int n = 0; n < 2000; ++n) {
        const double r = R(gen);
        const double u0 = U(gen);
        const double xi0 = play_update(U(gen), u0, r);  // band-compatible with u0
        const double u1 = U(gen);
        EXPECT_LE(std::abs(play_update(xi0, u1, r) - xi0), std::abs(u1 - u0) + 1e-15);
    }
}

// ---- memory_update --------------------------------------------------------

TEST(MemoryUpdate, VirginThenOneThenZero) {
    MemoryCurve m(1.0);
    oracle::RGridMemory g(2.0);
    m = memory_update(m, 1.0);
    g.apply(1.0);
    expect_curve_matches_grid(m, g, 1e-14);
    EXPECT_EQ(m.corners(), (std::vector<Corner>{{0.0, 1.0}, {1.0, 0.0}}));

    m = memory_update(m, 0.0);
    g.apply(0.0);
    expect_curve_matches_grid(m, g, 1e-14);
    EXPECT_EQ(m.corners(), (std::vector<Corner>{{0.0, 0.0}, {0.5, 0.5}, {1.0, 0.0}}));
}

TEST(MemoryUpdate, InputEqualToCurrentStateIsIdentity) {
    MemoryCurve m = memory_update(MemoryCurve(1.0), std::vector<double>{0.8, -0.3, 0.4});
    EXPECT_EQ(memory_update(m, m.input()), m);
}

TEST(MemoryUpdate, RandomSequencesMatchRGridOracle) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        MemoryCurve m(1.0);
        oracle::RGridMemory g(2.0);
        for (int k = 0; k < 30; ++k) {
            const double u = U(gen);
            m = memory_update(m, u);
            g.apply(u);
        }
        expect_curve_matches_grid(m, g, 1e-12);
        EXPECT_EQ(m.input(), m(0.0));
    }
}

TEST(MemoryUpdate, SemigroupAndRateIndependence) {
    const std::vector<double> path{0.3, 0.9, -0.2, 0.5, 0.1};
    MemoryCurve step = MemoryCurve(1.0);
    for (double u : path) step = memory_update(step, u);
    EXPECT_EQ(memory_update(MemoryCurve(1.0), path), step);

    // holding or re-sampling a monotone leg does not change the state
    const std::vector<double> dense{0.1, 0.2, 0.3, 0.3, 0.6, 0.9, 0.9, 0.4, 0.0, -0.2, 0.5, 0.1};
    EXPECT_EQ(memory_update(MemoryCurve(1.0), dense).corners().size(), step.corners().size());
    const MemoryCurve d = memory_update(MemoryCurve(1.0), dense);
    for (double r = 0.0; r < 1.5; r += 0.01) EXPECT_NEAR(d(r), step(r), 1e-15);
}

TEST(MemoryUpdate, OrderPreservation) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> U(-1.0, 1.0), D(0.0, 0.3);
    const auto density = separable();
    for (int trial = 0; trial < 50; ++trial) {
        MemoryCurve a(1.0), b(1.0);
        for (int k = 0; k < 12; ++k) {
            const double u1 = U(gen);
            const double u2 = std::min(1.0, u1 + D(gen));
            a = memory_update(a, u1);
            b = memory_update(b, u2);
            for (double r = 0.0; r < 2.0; r += 0.05) ASSERT_LE(a(r), b(r) + 1e-15);
            ASSERT_LE(preisach_output(a, density), preisach_output(b, density) + 1e-14);
        }
    }
}

// ---- Preisach output -----------------------------------------------------

TEST(PreisachOutput, Examples) {
    EXPECT_DOUBLE_EQ(preisach_output(MemoryCurve(1.0), rho2(0.2)), 0.2);
    EXPECT_DOUBLE_EQ(preisach_output(MemoryCurve(1.0), separable()), 0.1);
    const MemoryCurve peak = memory_update(MemoryCurve(1.0), 1.0);
    EXPECT_NEAR(preisach_output(peak, rho2()), 1.0, 1e-15);
    const MemoryCurve back = memory_update(peak, 0.0);
    // remanence rho * u1^2 / 4
    EXPECT_NEAR(preisach_output(back, rho2()), 0.5, 1e-15);
}

TEST(PreisachOutput, AgreesWithBruteForceForAllDensityKinds) {
    const std::vector<double> path{0.7, -0.4, 0.5, 0.1, 0.3};
    for (const auto& d : {rho2(0.1), separable(), grid()}) {
        MemoryCurve m(1.0);
        oracle::RGridMemory g(2.0, 4001);
        for (double u : path) {
            m = memory_update(m, u);
            g.apply(u);
        }
        EXPECT_NEAR(preisach_output(m, d), g.theta(d, 2000), 2e-6) << d.kind_name();
    }
}

TEST(PreisachOutput, BranchIncrementMatchesOutputDifferenceAndSlope) {
    for (const auto& d : {rho2(), separable(), grid()}) {
        const MemoryCurve m = memory_update(MemoryCurve(1.0), std::vector<double>{0.8, -0.5, 0.4, -0.1});
        const double base = preisach_output(m, d);
        for (double u : {-0.9, -0.3, -0.1, 0.0, 0.2, 0.45, 0.9}) {
            const auto b = branch_increment(m, u, d);
            EXPECT_NEAR(base + b.delta_theta, preisach_output(memory_update(m, u), d), 1e-9) << d.kind_name();
            const double h = 1e-6;
            const double fd = (branch_increment(m, u + h, d).delta_theta - branch_increment(m, u - h, d).delta_theta)
                              / (2 * h);
            if (u != m.input()) EXPECT_NEAR(b.slope, fd, 2e-4) << d.kind_name() << " u=" << u;
        }
        EXPECT_EQ(branch_increment(m, m.input(), d).slope, 0.0);
    }
}

TEST(PreisachOutput, ReturnPointMemory) {
    const auto d = rho2();
    MemoryCurve m = memory_update(MemoryCurve(1.0), 1.0);
    const double first_peak = preisach_output(m, d);
    m = memory_update(m, 0.0);
    m = memory_update(m, 1.0);
    EXPECT_NEAR(preisach_output(m, d), first_peak, 1e-12);

    // inner loop inside an outer one
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> U(-0.6, 0.6);
    for (int trial = 0; trial < 100; ++trial) {
        MemoryCurve c = memory_update(MemoryCurve(1.0), std::vector<double>{0.9, -0.8});
        const double a = U(gen);
        c = memory_update(c, a);
        const double start = preisach_output(c, d);
        const double b = std::max(a - 0.3, -0.79);  // reversal that stays above the last minimum
        c = memory_update(c, b);
        c = memory_update(c, a);
        EXPECT_NEAR(preisach_output(c, d), start, 1e-12);
    }
}

TEST(PreisachOutput, ReachableStatesStayBetweenLimitCurves) {
    std::mt19937_64 gen(19);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (const auto& d : {rho2(), separable()}) {
        MemoryCurve m(1.0);
        oracle::RGridMemory g(2.0);
        for (int k = 0; k < 300; ++k) {
            const double u = U(gen);
            m = memory_update(m, u);
            g.apply(u);
            const double theta = preisach_output(m, d);
            ASSERT_GE(theta, limit_wetting(d, u, 1.0) - 1e-13);
            ASSERT_LE(theta, limit_drying(d, u, 1.0) + 1e-13);
        }
        // the grid ensemble lands in the same band
        const double theta_grid = g.theta(d);
        EXPECT_GE(theta_grid, limit_wetting(d, g.xi()[0], 1.0) - 1e-4);
        EXPECT_LE(theta_grid, limit_drying(d, g.xi()[0], 1.0) + 1e-4);
    }
}

// ---- primary wetting curve ---------------------------------------------

TEST(PrimaryWetting, ClosedFormForConstantDensity) {
    const auto d = rho2();
    EXPECT_EQ(primary_wetting(d, 0.0), 0.0);
    for (double u : {0.1, 0.5, 1.0, 2.5}) EXPECT_NEAR(primary_wetting(d, u), u * u, 1e-15 * u * u);
    EXPECT_NEAR(primary_wetting(d, 0.5), 0.25, 1e-16);
    EXPECT_NEAR(primary_wetting(d, 0.5), preisach_output(memory_update(MemoryCurve(1.0), 0.5), d) - d.gbar(), 1e-16);
    EXPECT_THROW(primary_wetting(d, -0.1), DomainError);
}

TEST(PrimaryWetting, SeparableAndGridMatchQuadrature) {
    for (const auto& d : {separable(), grid()}) {
        for (double u : {0.2, 0.8, 1.4}) {
            const double ref = oracle::simpson(
                [&](double r) { return oracle::simpson([&](double v) { return d(r, v); }, 0.0, u - r, 400); }, 0.0, u,
                400);
            EXPECT_NEAR(primary_wetting(d, u), ref, 2e-6) << d.kind_name() << " u=" << u;
        }
    }
}

TEST(PrimaryWetting, TwoSidedBounds) {
    for (const auto& d : {rho2(), separable(), PreisachDensity::constant(2.0, 0.0, 1.0, 1.0)}) {
        const double u_star = 1.0;
        const double rho_star = std::min(primary_wetting(d, u_star), 0.5 * d.rho0(u_star));
        ASSERT_GT(rho_star, 0.0);
        for (double u = 0.01; u < 5.0; u += 0.01) {
            const double g = primary_wetting(d, u);
            EXPECT_LE(rho_star * std::pow(u / (1 + u), 2), g + 1e-15) << u;
            EXPECT_LE(g, 0.5 * d.rho1() * u * u + 1e-15) << u;
        }
    }
}

// ---- branches ----------------------------------------------------------

TEST(Branch, VirginAscendingBranchIsPrimaryWetting) {
    const auto d = rho2(0.3);
    const BranchPoint virgin(MemoryCurve(1.0));
    for (double u : {0.0, 0.25, 0.7, 1.0})
        EXPECT_NEAR(branch_value(virgin, u, BranchDirection::ascending, d), d.gbar() + primary_wetting(d, u), 1e-15);
}

TEST(Branch, DescendingDropAndReturn) {
    const auto d = rho2();
    const BranchPoint peak(memory_update(MemoryCurve(1.0), 1.0));
    const double top = preisach_output(peak.memory, d);
    EXPECT_NEAR(top - branch_value(peak, 0.0, BranchDirection::descending, d), 0.5, 1e-15);

    const BranchPoint trough(memory_update(peak.memory, 0.0));
    EXPECT_NEAR(branch_value(trough, 1.0, BranchDirection::ascending, d), top, 1e-12);
}

TEST(Branch, MonotoneAndSideChecked) {
    const auto d = separable();
    const BranchPoint a(memory_update(MemoryCurve(1.0), std::vector<double>{0.6, -0.2}));
    double prev = -1e300;
    for (double u = -0.2; u <= 1.0; u += 0.05) {
        const double v = branch_value(a, u, BranchDirection::ascending, d);
        EXPECT_GE(v, prev);
        prev = v;
    }
    prev = 1e300;
    for (double u = -0.2; u >= -1.0; u -= 0.05) {
        const double v = branch_value(a, u, BranchDirection::descending, d);
        EXPECT_LE(v, prev);
        prev = v;
    }
    EXPECT_THROW(branch_value(a, -0.5, BranchDirection::ascending, d), DomainError);
    EXPECT_THROW(branch_value(a, 0.1, BranchDirection::descending, d), DomainError);
}

// ---- initial memory and validation -------------------------------------

TEST(InitialMemory, Construction) {
    EXPECT_TRUE(make_initial_memory(0.0, 1.0, InitialMemoryMode::virgin).is_virgin());
    const MemoryCurve w = make_initial_memory(0.5, 1.0, InitialMemoryMode::wedge);
    for (double r = 0.0; r < 2.0; r += 0.01) EXPECT_DOUBLE_EQ(w(r), std::max(0.5 - r, 0.0));
    for (double u0 : {-0.9, -0.1, 0.0, 0.3, 1.0}) {
        EXPECT_EQ(make_initial_memory(u0, 1.0, InitialMemoryMode::wedge)(0.0), u0);
        EXPECT_FALSE(validate_hysteresis_inputs(rho2(), make_initial_memory(u0, 1.0, InitialMemoryMode::wedge))
                         .has_failures());
    }
    EXPECT_THROW(make_initial_memory(1.5, 1.0, InitialMemoryMode::wedge), DomainError);
    EXPECT_THROW(make_initial_memory(0.2, 1.0, InitialMemoryMode::virgin), DomainError);
}

TEST(Validation, SaturationWarningForLargeConstantDensity) {
    const auto d = PreisachDensity::constant(2.0, 0.0, 1.0, 1.0);
    const auto report = validate_hysteresis_inputs(d, MemoryCurve(1.0));
    const auto* wet = report.find("saturation bound (wetting)");
    ASSERT_NE(wet, nullptr);
    EXPECT_EQ(wet->status, CheckStatus::warn);
    EXPECT_NE(wet->witness.find("wetting integral 2 >"), std::string::npos) << wet->witness;
    EXPECT_EQ(report.find("density bounds rho0 < rho < rho1")->status, CheckStatus::pass_sampled);
    EXPECT_FALSE(report.has_failures());
}

TEST(Validation, WedgeMemoryPassesAllMemoryChecks) {
    const auto report = validate_hysteresis_inputs(rho2(), make_initial_memory(0.7, 1.0, InitialMemoryMode::wedge));
    for (const char* name : {"memory vanishes for r >= lambda_max", "memory 1-Lipschitz in r",
                             "memory below wedge (lambda_max - r)^+"})
        EXPECT_EQ(report.find(name)->status, CheckStatus::pass) << name;
}

TEST(Validation, ConstantMemoryFailsVanishingCondition) {
    const MemoryCurve flat({{0.0, 1.0}}, 1.0);
    const auto report = validate_hysteresis_inputs(PreisachDensity::constant(2.0, 0.0, 1.0, 1.0), flat);
    EXPECT_EQ(report.find("memory vanishes for r >= lambda_max")->status, CheckStatus::fail);
    EXPECT_TRUE(report.has_failures());
}

TEST(Validation, SteepMemoryFailsLipschitz) {
    const MemoryCurve steep({{0.0, 0.5}, {0.1, 0.0}}, 1.0);
    EXPECT_EQ(validate_hysteresis_inputs(rho2(), steep).find("memory 1-Lipschitz in r")->status, CheckStatus::fail);
}

TEST(Density, RejectsInvalidParameters) {
    EXPECT_THROW(PreisachDensity::constant(-1.0), DomainError);
    EXPECT_THROW(PreisachDensity::constant(1.0, 1.5), DomainError);
    EXPECT_THROW(PreisachDensity(SeparableDensity{1.0, 0.0, 1.0}), DomainError);
    EXPECT_THROW(GridDensity(1.0, 1.0, 2, 2, {1.0, 1.0, 1.0}), DomainError);
}

TEST(Density, SeparableClosedFormsAgainstQuadrature) {
    const auto d = separable();
    for (const Segment s : {Segment{0.0, 0.9, 0.6, 0.3}, Segment{0.2, -0.4, 1.1, 0.7}, Segment{0.5, 1.7, 2.5, -1.9}}) {
        // kinks where the segment crosses v = 0, v = +-v_max and r = r_max
        std::vector<double> breaks{2.0};
        for (double level : {-1.5, 0.0, 1.5})
            if ((s.x1 - level) * (s.x2 - level) < 0) breaks.push_back(s.r1 + (level - s.x1) / s.slope());
        auto ref = [&](auto g) { return oracle::gauss_split(g, s.r1, s.r2, breaks, 400); };
        EXPECT_NEAR(d.segment_inner(s), ref([&](double r) { return d.inner(r, s.at(r)); }), 1e-12);
        EXPECT_NEAR(d.line(s), ref([&](double r) { return d(r, s.at(r)); }), 1e-12);
        EXPECT_NEAR(d.segment_moment(s), ref([&](double r) { return d.moment(r, s.at(r)); }), 1e-12);
    }
    for (double x : {-2.0, -0.3, 0.0, 0.6, 1.4, 3.0}) {
        const double ref = oracle::gauss_split([&](double v) { return d(0.3, v); }, 0.0, x, {-1.5, 1.5}, 400);
        EXPECT_NEAR(d.inner(0.3, x), ref, 1e-12);
    }
}

TEST(Density, GridInnerIsExactForBilinearSamples) {
    const auto d = grid();
    std::vector<double> v_nodes;
    for (int k = 0; k < 13; ++k) v_nodes.push_back(-1.5 + 0.25 * k);
    for (double r : {0.0, 0.33, 1.2, 1.99}) {
        for (double x : {-1.6, -0.7, 0.0, 0.45, 1.5}) {
            // linear in v between nodes, so Simpson on each cell is exact
            EXPECT_NEAR(d.inner(r, x), oracle::gauss_split([&](double v) { return d(r, v); }, 0.0, x, v_nodes, 2),
                        1e-13);
            EXPECT_NEAR(d.moment(r, x),
                        oracle::gauss_split([&](double v) { return v * d(r, v); }, 0.0, x, v_nodes, 2), 1e-13);
        }
    }
    std::vector<double> r_nodes;
    for (int i = 0; i < 9; ++i) r_nodes.push_back(0.25 * i);
    EXPECT_NEAR(d.wetting_mass(), oracle::gauss_split([&](double r) { return d.inner(r, 1.5); }, 0.0, 2.0, r_nodes, 2),
                1e-12);
}

TEST(Density, SaturationMasses) {
    const auto c = PreisachDensity::constant(0.4, 0.3, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(c.wetting_mass(), 0.4);
    EXPECT_DOUBLE_EQ(c.drying_mass(), 0.4);
    const auto s = PreisachDensity(SeparableDensity{1.0, 0.5, 0.25});
    EXPECT_NEAR(s.wetting_mass(), 0.125, 1e-15);
}
