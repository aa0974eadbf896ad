#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hystflow/errors.hpp"
#include "hystflow/hysteresis/density.hpp"
#include "hystflow/hysteresis/preisach.hpp"
#include "hystflow/numerics/pchip.hpp"
#include "hystflow/numerics/quadrature.hpp"
#include "hystflow/series.hpp"
#include "hystflow/wave/wave_integral.hpp"

namespace hystflow {

struct WaveProfileOptions {
    double u_ref = 1.0;              // Lambda; also fixes the split point of F
    double extent = 1.05;            // table covers u in [0, extent * u_ref]
    std::size_t table_nodes = 4096;  // log-spaced
    double residual_tol = 1e-8;      // relative ODE residual at interior table nodes
};

/// Monotone traveling-wave profile U_c solving c Gamma0(U) = kappa (U')^{p-1},
/// U(0) = 0, obtained as U_c(z) = F^{-1}(c* z).
class WaveProfile {
  public:
    WaveProfile(const PreisachDensity& density, double p, double kappa, double c, const WaveProfileOptions& opt = {})
        : density_(std::make_shared<const PreisachDensity>(density)),
          f_(*density_, p, opt.u_ref),
          p_(p),
          kappa_(kappa),
          c_(c) {
        if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("wave profile: kappa must be > 0");
        if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("wave profile: speed c must be > 0");
        if (opt.table_nodes < 4) throw DomainError("wave profile: need at least 4 table nodes");
        if (!(opt.extent >= 1.0)) throw DomainError("wave profile: extent must be >= 1");
        c_star_ = std::pow(c / kappa, 1.0 / (p - 1.0));

        const std::size_t n = opt.table_nodes;
        const double u_lo = f_.delta();
        const double u_hi = opt.extent * opt.u_ref;
        u_.resize(n);
        F_.resize(n);
        const double ratio = std::log(u_hi / u_lo) / static_cast<double>(n - 1);
        for (std::size_t k = 0; k < n; ++k) u_[k] = u_lo * std::exp(ratio * static_cast<double>(k));
        u_.front() = u_lo;
        u_.back() = u_hi;
        F_[0] = f_.head(u_lo);
        for (std::size_t k = 1; k < n; ++k) F_[k] = F_[k - 1] + piece(u_[k - 1], u_[k]);
        inverse_guess_ = numerics::MonotoneCubic(F_, u_);
        z_max_ = F_.back() / c_star_;

        max_residual_ = 0.0;
        for (std::size_t k = 1; k + 1 < n; ++k) max_residual_ = std::max(max_residual_, residual(F_[k] / c_star_));
        if (!(max_residual_ <= opt.residual_tol))
            throw NonConvergence("wave profile: ODE residual " + std::to_string(max_residual_)
                                     + " above tolerance at the table nodes",
                                 max_residual_, 0);
    }

    double p() const noexcept { return p_; }
    double kappa() const noexcept { return kappa_; }
    double c() const noexcept { return c_; }
    double c_star() const noexcept { return c_star_; }
    double z_max() const noexcept { return z_max_; }
    double max_table_residual() const noexcept { return max_residual_; }
    const PreisachDensity& density() const noexcept { return *density_; }
    const std::vector<double>& u_table() const noexcept { return u_; }
    const std::vector<double>& F_table() const noexcept { return F_; }

    /// F(u) consistent with the table.
    double F(double u) const {
        if (u <= 0.0) return 0.0;
        if (u <= u_.front()) return f_.head(u);
        if (u >= u_.back()) return F_beyond(u);
        const std::size_t k = table_interval(u);
        return F_[k] + piece(u_[k], u);
    }

    /// F^{-1}(y), refined to machine precision.
    double F_inverse(double y) const {
        if (!(y > 0.0)) return 0.0;
        if (y <= F_.front()) return f_.head_inverse(y);
        if (y <= F_.back()) {
            const std::size_t k = std::min(inverse_guess_.interval(y), u_.size() - 2);
            return refine(y, u_[k], u_[k + 1], F_[k], std::clamp(inverse_guess_(y), u_[k], u_[k + 1]));
        }
        // beyond the table: march outwards in geometric chunks
        double ua = u_.back(), Fa = F_.back();
        for (int chunk = 0; chunk < 100000; ++chunk) {
            const double ub = 1.05 * ua;
            const double Fb = Fa + piece(ua, ub);
            if (Fb >= y) return refine(y, ua, ub, Fa, ua + (ub - ua) * (y - Fa) / (Fb - Fa));
            ua = ub;
            Fa = Fb;
        }
        throw DomainError("wave profile: argument far beyond the tabulated range");
    }

    /// U_c(z); zero for z <= 0.
    double operator()(double z) const { return z > 0.0 ? F_inverse(c_star_ * z) : 0.0; }

    /// U_c'(z) = c* / F'(U_c(z)).
    double derivative(double z) const {
        if (!(z > 0.0)) return 0.0;
        return c_star_ / f_.integrand((*this)(z));
    }

    /// Relative residual |c Gamma0(U) - kappa (U')^{p-1}| with U' from a
    /// five-point difference of the tabulated inverse.
    double residual(double z) const {
        if (!(z > 0.0)) return 0.0;
        const double h = 1e-4 * z;
        const double d = (-(*this)(z + 2 * h) + 8 * (*this)(z + h) - 8 * (*this)(z - h) + (*this)(z - 2 * h)) / (12 * h);
        const double lhs = c_ * primary_wetting(*density_, (*this)(z));
        const double rhs = kappa_ * std::pow(d, p_ - 1.0);
        const double scale = std::max(lhs, rhs);
        return scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
    }

    /// (z, U_c, U_c', residual) on `points` equispaced z in [0, z_max].
    Series to_series(std::size_t points = 201) const {
        Series s({"z", "U", "dU", "residual"});
        for (std::size_t i = 0; i < points; ++i) {
            const double z = z_max_ * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(points - 1, 1));
            s.push({z, (*this)(z), derivative(z), residual(z)});
        }
        return s;
    }

  private:
    double piece(double a, double b) const {
        return numerics::gauss_legendre8([this](double s) { return f_.integrand(s); }, a, b);
    }

    std::size_t table_interval(double u) const {
        auto it = std::upper_bound(u_.begin(), u_.end(), u);
        const auto k = static_cast<std::size_t>(it - u_.begin());
        return std::min(k == 0 ? 0 : k - 1, u_.size() - 2);
    }

    double F_beyond(double u) const {
        double ua = u_.back(), Fa = F_.back();
        while (1.05 * ua < u) {
            Fa += piece(ua, 1.05 * ua);
            ua *= 1.05;
        }
        return Fa + piece(ua, u);
    }

    // Safeguarded Newton for Fa + \int_a^u F' = y on [a, b].
    double refine(double y, double a, double b, double Fa, double guess) const {
        double lo = a, hi = b, u = guess;
        for (int it = 0; it < 100; ++it) {
            const double g = Fa + piece(a, u) - y;
            if (g == 0.0) return u;
            if (g > 0.0)
                hi = u;
            else
                lo = u;
            double next = u - g / f_.integrand(u);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - u) <= 2.0 * std::numeric_limits<double>::epsilon() * u || hi - lo <= 0.0) return next;
            u = next;
        }
        return u;
    }

    std::shared_ptr<const PreisachDensity> density_;
    detail::WaveF f_;
    double p_, kappa_, c_, c_star_ = 0.0, z_max_ = 0.0, max_residual_ = 0.0;
    std::vector<double> u_, F_;
    numerics::MonotoneCubic inverse_guess_;
};

/// Profile for speed c; refuses p <= 3, where F diverges.
inline WaveProfile build_wave_profile(const PreisachDensity& density, double p, double kappa, double c,
                                      const WaveProfileOptions& opt = {}) {
    return WaveProfile(density, p, kappa, c, opt);
}

/// Smallest speed for which U_c(R - R0) >= Lambda:
/// c = kappa (F(Lambda) / (R - R0))^{p-1}.
inline double min_wave_speed(double R, double R0, double Lambda, double kappa, double p,
                             const PreisachDensity& density) {
    if (!(R > R0)) throw DomainError("min_wave_speed: need R > R0");
    if (!(Lambda > 0.0)) throw DomainError("min_wave_speed: Lambda must be > 0");
    if (!(kappa > 0.0)) throw DomainError("min_wave_speed: kappa must be > 0");
    const auto F = wave_integral_F(density, p, Lambda);
    if (!F.is_finite())
        throw UnsupportedExponent("min_wave_speed: no traveling wave for p = " + std::to_string(p) + " (need p > 3)");
    return kappa * std::pow(F.value / (R - R0), p - 1.0);
}

/// u_e(x, t) = U_c(c t + R - e.x)
inline double evaluate_wave(std::span<const double> x, double t, std::span<const double> e, double R,
                            const WaveProfile& profile) {
    if (x.size() != e.size()) throw DomainError("evaluate_wave: point and direction dimensions differ");
    double ex = 0.0, norm2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ex += e[i] * x[i];
        norm2 += e[i] * e[i];
    }
    if (std::abs(norm2 - 1.0) > 1e-12) throw DomainError("evaluate_wave: direction must be a unit vector");
    return profile(profile.c() * t + R - ex);
}

}  // namespace hystflow
