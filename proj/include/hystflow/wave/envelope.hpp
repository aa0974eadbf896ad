#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "hystflow/errors.hpp"
#include "hystflow/series.hpp"
#include "hystflow/wave/wave_integral.hpp"

namespace hystflow {

/// Upper bound R(t) = R0 + C_p t^{1/p} for the wet region, the envelope of
/// the lines R + c t over all admissible (c, R).
struct FrontEnvelope {
    double R0 = 0.0;
    double lambda_bar = 0.0;
    double p = 4.0;
    double C_p = 0.0;

    FrontEnvelope() = default;
    FrontEnvelope(double R0_, double lambda_bar_, double p_) : R0(R0_), lambda_bar(lambda_bar_), p(p_) {
        if (!wave_integral_converges(p))
            throw UnsupportedExponent("front envelope requires p > 3, got p = " + std::to_string(p));
        if (!(lambda_bar > 0.0) || !std::isfinite(lambda_bar)) throw DomainError("front envelope: lambda_bar must be > 0");
        if (!(R0 >= 0.0)) throw DomainError("front envelope: R0 must be >= 0");
        C_p = p * std::pow(lambda_bar / (p - 1.0), (p - 1.0) / p);
    }
};

/// lambda_bar = kappa^{1/(p-1)} F(Lambda)
inline FrontEnvelope make_front_envelope(const PreisachDensity& density, double p, double kappa, double Lambda,
                                         double R0) {
    if (!(kappa > 0.0)) throw DomainError("front envelope: kappa must be > 0");
    const auto F = wave_integral_F(density, p, Lambda);
    if (!F.is_finite())
        throw UnsupportedExponent("front envelope requires p > 3, got p = " + std::to_string(p));
    return FrontEnvelope(R0, std::pow(kappa, 1.0 / (p - 1.0)) * F.value, p);
}

inline double envelope_radius(double t, const FrontEnvelope& env) {
    if (!(t >= 0.0)) throw DomainError("envelope_radius: t must be >= 0");
    return env.R0 + env.C_p * std::pow(t, 1.0 / env.p);
}

/// dR/dt, infinite at t = 0.
inline double envelope_rate(double t, const FrontEnvelope& env) {
    if (!(t > 0.0)) return kInf;
    return env.C_p / env.p * std::pow(t, 1.0 / env.p - 1.0);
}

/// R - t R' - R0 - lambda_bar R'^{-1/(p-1)}, zero along the envelope.
inline double envelope_ode_residual(double t, const FrontEnvelope& env) {
    const double rate = envelope_rate(t, env);
    return envelope_radius(t, env) - t * rate - env.R0 - env.lambda_bar * std::pow(rate, -1.0 / (env.p - 1.0));
}

/// Offset R of the dominating line R + c t for speed c.
inline double tangent_offset(double c, const FrontEnvelope& env) {
    if (!(c > 0.0)) throw DomainError("tangent_offset: c must be > 0");
    return env.R0 + env.lambda_bar * std::pow(c, -1.0 / (env.p - 1.0));
}

/// Contact time of the line with speed c: R'(t) = c.
inline double tangent_time(double c, const FrontEnvelope& env) {
    if (!(c > 0.0)) throw DomainError("tangent_time: c must be > 0");
    return std::pow(env.C_p / (env.p * c), env.p / (env.p - 1.0));
}

/// (t, R) on `points` equispaced times in [0, t_end].
inline Series envelope_series(const FrontEnvelope& env, double t_end, std::size_t points = 201) {
    Series s({"t", "R"});
    for (std::size_t i = 0; i < points; ++i) {
        const double t = t_end * static_cast<double>(i) / static_cast<double>(points > 1 ? points - 1 : 1);
        s.push({t, envelope_radius(t, env)});
    }
    return s;
}

}  // namespace hystflow
