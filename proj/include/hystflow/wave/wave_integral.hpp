#pragma once

#include <cmath>
#include <string>

#include "hystflow/errors.hpp"
#include "hystflow/hysteresis/density.hpp"
#include "hystflow/hysteresis/preisach.hpp"
#include "hystflow/numerics/quadrature.hpp"

namespace hystflow {

/// Result of F(u*) = \int_0^{u*} Gamma0(u)^{-1/(p-1)} du.
struct WaveIntegral {
    enum class Kind { finite, divergent };
    Kind kind = Kind::divergent;
    double value = kInf;

    static WaveIntegral finite(double v) { return {Kind::finite, v}; }
    static WaveIntegral divergent() { return {Kind::divergent, kInf}; }
    bool is_finite() const noexcept { return kind == Kind::finite; }
};

inline void require_flux_exponent(double p) {
    if (!(p > 2.0) || !std::isfinite(p))
        throw UnsupportedExponent("flux exponent p = " + std::to_string(p) + " not supported, need p > 2");
}

/// Gamma0 grows like u^2 near 0, so the integrand behaves like u^{-2/(p-1)}:
/// integrable iff 2/(p-1) < 1.
inline bool wave_integral_converges(double p) {
    require_flux_exponent(p);
    return 2.0 / (p - 1.0) < 1.0;
}

namespace detail {

/// F split into a power-law head on [0, delta] (Gamma0 ~ rho(0,0) u^2 / 2)
/// and a regular part beyond. Shared by the scalar integral and the profile
/// table so both see the same F.
class WaveF {
  public:
    static constexpr double head_fraction = 1e-3;

    WaveF(const PreisachDensity& density, double p, double u_ref) : density_(&density), p_(p) {
        if (!wave_integral_converges(p))
            throw UnsupportedExponent("traveling wave integral diverges for p = " + std::to_string(p)
                                      + " (finite only for p > 3)");
        if (!(u_ref > 0.0) || !std::isfinite(u_ref)) throw DomainError("wave integral: reference value must be > 0");
        const double rho00 = density(0.0, 0.0);
        if (!(rho00 > 0.0)) throw DomainError("wave integral: density must be positive at (0, 0)");
        a_ = 0.5 * rho00;
        q_ = 2.0 / (p - 1.0);
        delta_ = head_fraction * u_ref;
        k_ = std::pow(a_, -1.0 / (p - 1.0)) / (1.0 - q_);
    }

    double p() const noexcept { return p_; }
    double delta() const noexcept { return delta_; }
    const PreisachDensity& density() const noexcept { return *density_; }

    /// dF/du
    double integrand(double u) const {
        if (u <= delta_) return std::pow(a_ * u * u, -1.0 / (p_ - 1.0));
        return std::pow(primary_wetting(*density_, u), -1.0 / (p_ - 1.0));
    }

    /// F on the head [0, delta], closed form.
    double head(double u) const { return k_ * std::pow(u, 1.0 - q_); }
    double head_inverse(double y) const { return std::pow(y / k_, 1.0 / (1.0 - q_)); }

    /// F(u) for any u >= 0. The regular part goes through adaptive Simpson
    /// in log u, where the integrand is smooth and mildly varying.
    double operator()(double u, double tol = 1e-13) const {
        if (u <= delta_) return head(u);
        auto g = [this](double s) {
            const double v = delta_ * std::exp(s);
            return integrand(v) * v;
        };
        return head(delta_) + numerics::adaptive_simpson(g, 0.0, std::log(u / delta_), tol);
    }

  private:
    const PreisachDensity* density_;
    double p_, a_ = 0.0, q_ = 0.0, delta_ = 0.0, k_ = 0.0;
};

}  // namespace detail

/// F(u*) = \int_0^{u*} Gamma0(u)^{-1/(p-1)} du; Divergent for p <= 3.
inline WaveIntegral wave_integral_F(const PreisachDensity& density, double p, double u_star) {
    if (!wave_integral_converges(p)) return WaveIntegral::divergent();
    if (!(u_star >= 0.0)) throw DomainError("wave_integral_F: u_star must be >= 0");
    if (u_star == 0.0) return WaveIntegral::finite(0.0);
    return WaveIntegral::finite(detail::WaveF(density, p, u_star)(u_star));
}

}  // namespace hystflow
