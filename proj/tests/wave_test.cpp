#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hystflow/wave/envelope.hpp"
#include "hystflow/wave/profile.hpp"
#include "hystflow/wave/wave_integral.hpp"
#include "oracles.hpp"

using namespace hystflow;

namespace {

PreisachDensity rho2() { return PreisachDensity::constant(2.0); }
PreisachDensity separable() { return PreisachDensity(SeparableDensity{1.5, 0.7, 0.4}, 0.1); }

/// F for rho == 2 (Gamma0 = u^2): u^{1-q} / (1-q), q = 2/(p-1).
double F_rho2(double p, double u) {
    const double q = 2.0 / (p - 1.0);
    return std::pow(u, 1.0 - q) / (1.0 - q);
}

/// Brute-force F: Gamma0 by nested Gauss, outer integral after the
/// substitution u = u* s^k that removes the endpoint singularity.
double F_brute(const PreisachDensity& d, double p, double u_star) {
    const double q = 2.0 / (p - 1.0);
    const double k = 1.0 / (1.0 - q);
    auto gamma0 = [&](double u) {
        return oracle::gauss_split(
            [&](double r) { return oracle::gauss_split([&](double v) { return d(r, v); }, 0.0, u - r, {}, 4); }, 0.0,
            u, {}, 8);
    };
    return oracle::gauss_split(
        [&](double s) {
            const double u = u_star * std::pow(s, k);
            return std::pow(gamma0(u), -1.0 / (p - 1.0)) * k * u_star * std::pow(s, k - 1.0);
        },
        0.0, 1.0, {}, 64);
}

}  // namespace

// ---- F -------------------------------------------------------------------

TEST(WaveIntegral, Examples) {
    const auto F = wave_integral_F(rho2(), 4.0, 1.0);
    ASSERT_TRUE(F.is_finite());
    EXPECT_NEAR(F.value, 3.0, 1e-12);
    EXPECT_FALSE(wave_integral_F(rho2(), 3.0, 1.0).is_finite());
    EXPECT_EQ(wave_integral_F(rho2(), 4.0, 0.0).value, 0.0);
    EXPECT_THROW(wave_integral_F(rho2(), 2.0, 1.0), UnsupportedExponent);
    EXPECT_THROW(wave_integral_F(rho2(), 1.5, 1.0), UnsupportedExponent);
}

TEST(WaveIntegral, FinitenessDichotomy) {
    for (const auto& d : {rho2(), separable(), PreisachDensity::constant(0.7, 0.0, 3.0, 3.0)}) {
        for (double p : {2.5, 3.0, 3.5, 4.0, 6.0}) {
            const auto F = wave_integral_F(d, p, 1.0);
            EXPECT_EQ(F.is_finite(), p > 3.0) << d.kind_name() << " p=" << p;
            if (F.is_finite()) {
                EXPECT_TRUE(std::isfinite(F.value) && F.value > 0.0);
            }
        }
    }
}

TEST(WaveIntegral, ConstantDensityClosedForm) {
    for (double p : {3.5, 4.0, 5.0, 6.0})
        for (double u : {0.01, 0.3, 1.0, 2.0})
            EXPECT_NEAR(wave_integral_F(rho2(), p, u).value, F_rho2(p, u), 1e-11 * F_rho2(p, u)) << p << " " << u;
}

TEST(WaveIntegral, SeparableAgainstBruteForce) {
    // the power-law head on [0, 1e-3 u*] is only first-order accurate for
    // densities that vary near the origin
    for (double p : {3.5, 4.0, 6.0}) {
        const double ref = F_brute(separable(), p, 0.8);
        EXPECT_NEAR(wave_integral_F(separable(), p, 0.8).value, ref, 2e-4 * ref) << p;
    }
}

// ---- profiles --------------------------------------------------------------

TEST(WaveProfile, CubicClosedForm) {
    const auto prof = build_wave_profile(rho2(), 4.0, 1.0, 27.0);
    EXPECT_NEAR(prof.c_star(), 3.0, 1e-15);
    EXPECT_EQ(prof(0.0), 0.0);
    EXPECT_EQ(prof(-1.0), 0.0);
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double z = i / 1000.0;
        worst = std::max(worst, std::abs(prof(z) - z * z * z));
    }
    EXPECT_LE(worst, 1e-8);
    EXPECT_LE(prof.max_table_residual(), 1e-8);
    // z = 2 lies beyond the table: U = 8, U' = 12, 27 * 64 - 12^3 = 0
    EXPECT_NEAR(prof(2.0), 8.0, 1e-11);
    EXPECT_NEAR(prof.derivative(2.0), 12.0, 1e-10);
    EXPECT_LE(prof.residual(2.0), 1e-8);
    EXPECT_NEAR(prof.z_max(), std::cbrt(1.05), 1e-12);
}

TEST(WaveProfile, IncreasingConvexAndConsistentWithF) {
    for (const auto& d : {rho2(), separable()}) {
        for (double p : {3.5, 4.0, 6.0}) {
            const auto prof = build_wave_profile(d, p, 0.8, 2.0);
            EXPECT_LE(prof.max_table_residual(), 1e-8);
            double prev = 0.0, prev_slope = 0.0;
            const double h = prof.z_max() / 400;
            for (int i = 1; i <= 400; ++i) {
                const double U = prof(i * h);
                EXPECT_GT(U, prev);
                const double slope = (U - prev) / h;
                EXPECT_GE(slope, prev_slope * (1 - 1e-12));
                prev = U;
                prev_slope = slope;
            }
            EXPECT_NEAR(prof.F(1.0), wave_integral_F(d, p, 1.0).value, 1e-11);
            EXPECT_NEAR(prof.F_inverse(prof.F(0.37)), 0.37, 1e-14);
        }
    }
}

TEST(WaveProfile, RefusesDivergentAndBadParameters) {
    EXPECT_THROW(build_wave_profile(rho2(), 3.0, 1.0, 1.0), UnsupportedExponent);
    EXPECT_THROW(build_wave_profile(rho2(), 2.5, 1.0, 1.0), UnsupportedExponent);
    EXPECT_THROW(build_wave_profile(rho2(), 4.0, 0.0, 1.0), DomainError);
    EXPECT_THROW(build_wave_profile(rho2(), 4.0, 1.0, -1.0), DomainError);
}

TEST(WaveProfile, SmallZScalingLaw) {
    for (const auto& d : {rho2(), separable()}) {
        for (double p : {3.5, 4.0, 5.0, 6.0}) {
            const auto prof = build_wave_profile(d, p, 1.0, 1.0);
            // least-squares slope of log U against log z on [1e-4, 1e-2]
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const int n = 41;
            for (int i = 0; i < n; ++i) {
                const double lz = std::log(1e-4) + (std::log(1e-2) - std::log(1e-4)) * i / (n - 1);
                const double ly = std::log(prof(std::exp(lz)));
                sx += lz;
                sy += ly;
                sxx += lz * lz;
                sxy += lz * ly;
            }
            const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            const double expected = (p - 1) / (p - 3);
            EXPECT_NEAR(slope, expected, 0.02 * expected) << d.kind_name() << " p=" << p;
        }
    }
}

// ---- speed selection -------------------------------------------------------

TEST(MinWaveSpeed, Examples) {
    EXPECT_NEAR(min_wave_speed(2.0, 1.0, 1.0, 1.0, 4.0, rho2()), 27.0, 1e-11);
    EXPECT_NEAR(min_wave_speed(4.0, 1.0, 1.0, 1.0, 4.0, rho2()), 1.0, 1e-12);
    for (double p : {3.5, 4.0, 6.0}) {
        const double c1 = min_wave_speed(1.7, 1.0, 1.0, 1.3, p, separable());
        const double c2 = min_wave_speed(2.4, 1.0, 1.0, 1.3, p, separable());
        EXPECT_NEAR(c1 / c2, std::pow(2.0, p - 1.0), 1e-12 * c1 / c2);
    }
    EXPECT_THROW(min_wave_speed(1.0, 1.0, 1.0, 1.0, 4.0, rho2()), DomainError);
    EXPECT_THROW(min_wave_speed(2.0, 1.0, 1.0, 1.0, 3.0, rho2()), UnsupportedExponent);
}

TEST(MinWaveSpeed, DominatesLambdaAtRMinusR0) {
    for (const auto& d : {rho2(), separable()}) {
        for (double p : {3.5, 4.0, 6.0}) {
            for (double gap : {0.3, 1.0, 2.5}) {
                const double Lambda = 1.0, kappa = 0.9;
                const double c = min_wave_speed(1.0 + gap, 1.0, Lambda, kappa, p, d);
                WaveProfileOptions opt;
                opt.u_ref = Lambda;
                const auto prof = build_wave_profile(d, p, kappa, c, opt);
                EXPECT_GE(prof(gap), Lambda * (1 - 1e-12)) << d.kind_name() << " p=" << p;
            }
        }
    }
}

// ---- envelope -------------------------------------------------------------

TEST(Envelope, Examples) {
    const FrontEnvelope env(1.0, 3.0, 4.0);
    EXPECT_DOUBLE_EQ(env.C_p, 4.0);
    EXPECT_DOUBLE_EQ(envelope_radius(16.0, env), 9.0);
    EXPECT_EQ(envelope_radius(0.0, env), 1.0);
    EXPECT_DOUBLE_EQ(envelope_radius(1.0, env), 5.0);
    EXPECT_DOUBLE_EQ(envelope_rate(1.0, env), 1.0);
    EXPECT_NEAR(envelope_ode_residual(1.0, env), 0.0, 1e-15);
    EXPECT_THROW(envelope_radius(-1.0, env), DomainError);
    EXPECT_THROW(FrontEnvelope(1.0, 3.0, 3.0), UnsupportedExponent);

    const auto from_density = make_front_envelope(rho2(), 4.0, 1.0, 1.0, 1.0);
    EXPECT_NEAR(from_density.lambda_bar, 3.0, 1e-12);
    EXPECT_NEAR(from_density.C_p, 4.0, 1e-12);
}

TEST(Envelope, OdeResidualAndShape) {
    for (double p : {3.5, 4.0, 6.0}) {
        const FrontEnvelope env(0.5, 1.7, p);
        double prev = envelope_radius(0.0, env), prev_rate = kInf;
        for (int i = 1; i <= 100; ++i) {
            const double t = 0.05 * i * i;
            EXPECT_LE(std::abs(envelope_ode_residual(t, env)), 1e-12 * envelope_radius(t, env));
            EXPECT_GT(envelope_radius(t, env), prev);
            EXPECT_LT(envelope_rate(t, env), prev_rate);
            prev = envelope_radius(t, env);
            prev_rate = envelope_rate(t, env);
        }
    }
}

TEST(Envelope, DominatingLinesAreTangent) {
    for (double p : {3.5, 4.0, 6.0}) {
        const auto env = make_front_envelope(separable(), p, 1.2, 1.0, 1.0);
        for (double c : {0.05, 0.5, 3.0, 27.0}) {
            const double R = tangent_offset(c, env);
            // same R as the speed selection rule
            EXPECT_NEAR(min_wave_speed(R, env.R0, 1.0, 1.2, p, separable()), c, 1e-10 * c);
            const double t_star = tangent_time(c, env);
            double min_gap = kInf;
            for (int i = 0; i <= 20000; ++i) {
                const double t = t_star * (i / 10000.0);
                const double gap = R + c * t - envelope_radius(t, env);
                EXPECT_GE(gap, -1e-12 * (1 + R));
                min_gap = std::min(min_gap, gap);
            }
            EXPECT_LE(min_gap, 1e-10);
            EXPECT_NEAR(R + c * t_star, envelope_radius(t_star, env), 1e-12 * R);
        }
    }
}

// ---- wave evaluation -----------------------------------------------------

TEST(EvaluateWave, Examples) {
    const auto prof = build_wave_profile(rho2(), 4.0, 1.0, 27.0);
    const std::array<double, 1> e{1.0};
    const std::array<double, 1> far{1.0 + 27.0 * 0.1 + 0.5};
    EXPECT_EQ(evaluate_wave(far, 0.1, e, 1.0, prof), 0.0);
    const std::array<double, 1> origin{0.0};
    EXPECT_NEAR(evaluate_wave(origin, 0.0, e, 1.0, prof), 1.0, 1e-12);
    const std::array<double, 2> bad{1.0, 1.0};
    const std::array<double, 2> x2{0.0, 0.0};
    EXPECT_THROW(evaluate_wave(x2, 0.0, bad, 1.0, prof), DomainError);
}

TEST(EvaluateWave, NondecreasingInTime) {
    const auto prof = build_wave_profile(separable(), 4.0, 1.0, 0.4);
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> X(-3.0, 3.0), A(0.0, 2 * M_PI);
    for (int n = 0; n < 100; ++n) {
        const std::array<double, 2> x{X(gen), X(gen)};
        const double a = A(gen);
        const std::array<double, 2> e{std::cos(a), std::sin(a)};
        double prev = 0.0;
        for (int k = 0; k <= 50; ++k) {
            const double v = evaluate_wave(x, 0.2 * k, e, 1.5, prof);
            EXPECT_GE(v, prev);
            prev = v;
        }
    }
}
