#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "hystflow/experiments/comparison.hpp"
#include "hystflow/experiments/front_bound.hpp"
#include "hystflow/experiments/loops.hpp"
#include "hystflow/experiments/regimes.hpp"

using namespace hystflow;

namespace {

SimulationSetup small_front_setup() {
    SimulationSetup s;
    s.geometry = Geometry{GeometryKind::interval, 3.0, 1, 151};
    s.tau = 1e-3;
    s.steps = 200;
    s.initial.kind = InitialSpec::Kind::bump;
    s.initial.R0 = 1.0;
    return s;
}

}  // namespace

TEST(FrontBound, ZeroInitialDataPasses) {
    auto s = small_front_setup();
    s.initial.kind = InitialSpec::Kind::zero;
    s.steps = 20;
    const auto rep = front_bound_experiment(s);
    EXPECT_TRUE(rep.passed) << rep.failure;
    for (double r : rep.series.column("R_supp")) EXPECT_EQ(r, 0.0);
    EXPECT_EQ(rep.series.rows(), 21u);
}

TEST(FrontBound, SmallBumpRunStaysInsideEnvelope) {
    const auto s = small_front_setup();
    const auto rep = front_bound_experiment(s);
    EXPECT_TRUE(rep.passed) << rep.failure;
    EXPECT_GE(rep.min_margin, -rep.slack);
    EXPECT_LE(rep.max_comparison, 1e-8);
    EXPECT_NEAR(rep.C_p, 4.0 * std::pow(rep.lambda_bar / 3.0, 0.75), 1e-12);
    EXPECT_DOUBLE_EQ(rep.wave_offset, 2.0);  // midpoint of (R0, L)
    EXPECT_EQ(rep.series.names.front(), "t");
    EXPECT_FALSE(rep.validation.has_failures());
    // the front moves
    EXPECT_GT(rep.series.column("R_supp").back(), 1.0);
}

TEST(FrontBound, ShrunkEnvelopeCanaryFails) {
    auto s = small_front_setup();
    FrontBoundOptions opt;
    opt.envelope_scale = 0.9;
    opt.stop_at_first_violation = true;
    const auto rep = front_bound_experiment(s, opt);
    EXPECT_FALSE(rep.passed);
    ASSERT_TRUE(rep.first_violation_step.has_value());
    EXPECT_NE(rep.failure.find("support radius"), std::string::npos) << rep.failure;
}

TEST(FrontBound, Preconditions) {
    auto s = small_front_setup();
    s.p = 2.5;
    EXPECT_THROW(front_bound_experiment(s), UnsupportedExponent);
    s.p = 3.0;
    EXPECT_THROW(front_bound_experiment(s), UnsupportedExponent);
    s = small_front_setup();
    FrontBoundOptions opt;
    opt.R0 = 4.0;  // outside the domain
    EXPECT_THROW(front_bound_experiment(s, opt), DomainError);
    s.permeability = Permeability::piecewise_x({0.0, 1.0}, {1.0, 2.0});
    EXPECT_THROW(front_bound_experiment(s), DomainError);
}

TEST(FrontBound, InadmissibleInitialDataIsReported) {
    auto s = small_front_setup();
    s.initial.R0 = 1.5;  // bump wider than the declared R0 = 1
    const auto rep = front_bound_experiment(s);
    EXPECT_FALSE(rep.passed);
    EXPECT_TRUE(rep.validation.has_failures());
    EXPECT_EQ(rep.steps_run, 0u);
}

TEST(Regimes, ClassificationByExponent) {
    const std::array<double, 5> ps{2.5, 3.0, 3.5, 4.0, 6.0};
    const auto rows = regime_classification(ps, PreisachDensity::constant(2.0));
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[0].classification, "fast/unbounded");
    EXPECT_EQ(rows[1].classification, "fast/unbounded");
    EXPECT_EQ(rows[2].classification, "slow/bounded");
    EXPECT_EQ(rows[3].classification, "slow/bounded");
    EXPECT_EQ(rows[4].classification, "slow/bounded");
    EXPECT_NE(rows[1].note.find("critical"), std::string::npos);
    EXPECT_NE(rows[0].note.find("< m = 2"), std::string::npos);
    EXPECT_NE(rows[3].note.find("> m = 2"), std::string::npos);
    // F(1) = 1 / (1 - q), q = 2/(p-1)
    EXPECT_NEAR(rows[3].F.value, 3.0, 1e-9);
}

TEST(Regimes, DeterministicAndRejectsSmallExponent) {
    const std::array<double, 3> ps{3.5, 2.7, 5.0};
    const auto d = PreisachDensity(SeparableDensity{1.5, 0.7, 0.4}, 0.1);
    const auto a = regime_classification(ps, d);
    const auto b = regime_classification(ps, d);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].classification, b[i].classification);
        EXPECT_EQ(a[i].F.value, b[i].F.value);
    }
    const std::array<double, 1> bad{2.0};
    EXPECT_THROW(regime_classification(bad, d), UnsupportedExponent);
}

TEST(Regimes, SupportGrowthIsDescriptive) {
    auto s = small_front_setup();
    s.p = 2.5;
    s.steps = 50;
    const auto g = support_growth(s);
    ASSERT_EQ(g.rows(), 51u);
    const auto& r = g.column("R_supp");
    EXPECT_GE(r.back(), r.front());
}

TEST(Loops, MonotoneFromVirginIsPrimaryWetting) {
    const auto d = PreisachDensity::constant(2.0, 0.1);
    const std::array<double, 1> path{1.0};
    const auto out = loop_experiment(d, path);
    const auto& u = out.trace.column("u");
    const auto& th = out.trace.column("theta");
    for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(th[i], 0.1 + u[i] * u[i], 1e-14);
}

TEST(Loops, ReturnPointAndRemanence) {
    const auto d = PreisachDensity::constant(2.0);
    const std::array<double, 4> path{0.0, 1.0, 0.0, 1.0};
    const auto out = loop_experiment(d, path);
    ASSERT_EQ(out.vertex_theta.size(), 4u);
    EXPECT_NEAR(out.vertex_theta[1], out.vertex_theta[3], 1e-12);
    EXPECT_NEAR(out.vertex_theta[2], 0.5, 1e-12);
}

TEST(Loops, TraceBetweenLimitCurves) {
    const auto d = PreisachDensity(SeparableDensity{1.5, 0.7, 0.4}, 0.2);
    const std::array<double, 7> path{0.6, -0.4, 0.3, -0.9, 1.0, -1.0, 0.2};
    const auto out = loop_experiment(d, path);
    const auto& u = out.trace.column("u");
    const auto& th = out.trace.column("theta");
    for (std::size_t i = 0; i < u.size(); ++i) {
        EXPECT_GE(th[i], limit_wetting(d, u[i], 1.0) - 1e-12) << i;
        EXPECT_LE(th[i], limit_drying(d, u[i], 1.0) + 1e-12) << i;
    }
}

TEST(Loops, RateIndependent) {
    const auto d = PreisachDensity::constant(2.0);
    const std::array<double, 3> path{0.8, -0.3, 0.5};
    LoopOptions coarse, fine;
    coarse.points_per_leg = 7;
    fine.points_per_leg = 301;
    const auto a = loop_experiment(d, path, coarse);
    const auto b = loop_experiment(d, path, fine);
    for (std::size_t k = 0; k < path.size(); ++k) EXPECT_NEAR(a.vertex_theta[k], b.vertex_theta[k], 1e-14);
    const std::array<double, 1> bad{1.2};
    EXPECT_THROW(loop_experiment(d, bad), DomainError);
}

TEST(Comparison, OrderedBumpsStayOrdered) {
    auto s = small_front_setup();
    s.steps = 150;
    const auto rep = comparison_experiment(s, 1.1);
    EXPECT_TRUE(rep.passed) << rep.failure;
    EXPECT_TRUE(rep.ordered);
    EXPECT_TRUE(rep.deterministic);
    EXPECT_LE(rep.max_violation, 1e-9);
}

TEST(Comparison, IdenticalStatesGiveIdenticalTrajectories) {
    auto s = small_front_setup();
    s.steps = 30;
    const auto rep = comparison_experiment(s, 1.0);
    EXPECT_TRUE(rep.passed) << rep.failure;
    for (double v : rep.series.column("max_violation")) EXPECT_EQ(v, 0.0);
}

TEST(Comparison, OrderedMemoriesGiveOrderedTheta) {
    const auto d = PreisachDensity::constant(2.0);
    // same input 0.2, one memory lies above the other
    const MemoryCurve lo({{0.0, 0.2}, {0.2, 0.0}}, 1.0);
    const MemoryCurve hi({{0.0, 0.2}, {0.4, 0.6}, {1.0, 0.0}}, 1.0);
    EXPECT_LE(preisach_output(lo, d), preisach_output(hi, d));
}

TEST(Comparison, RejectsUnorderedInput) {
    auto s = small_front_setup();
    s.steps = 5;
    const auto rep = comparison_experiment(s, 0.9);
    EXPECT_FALSE(rep.passed);
    EXPECT_FALSE(rep.initially_ordered);
}

// Halving dx and tau on the acceptance scenario keeps the envelope check
// passing; the first 0.2 time units cover the fastest front motion.
TEST(FrontBound, RefinementKeepsPass) {
    SimulationSetup s;
    s.initial.kind = InitialSpec::Kind::bump;
    s.steps = 200;
    const auto coarse = front_bound_experiment(s);
    s.geometry.M = 1201;
    s.tau = 5e-4;
    s.steps = 400;
    const auto fine = front_bound_experiment(s);
    EXPECT_TRUE(coarse.passed) << coarse.failure;
    EXPECT_TRUE(fine.passed) << fine.failure;
    const double dx = 6.0 / 600.0;
    EXPECT_LE(std::abs(coarse.series.column("R_supp").back() - fine.series.column("R_supp").back()), 2.0 * dx);
}
