#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>

#include "hystflow/hysteresis/density.hpp"
#include "hystflow/hysteresis/memory_curve.hpp"
#include "hystflow/report.hpp"

namespace hystflow {

struct HysteresisValidationOptions {
    std::size_t samples = 64;  // per axis for the (r, v) sampling of the density bounds
    double tol = 1e-12;
};

namespace detail {
template<class... T>
std::string cat(const T&... parts) {
    std::ostringstream os;
    os.precision(10);
    (os << ... << parts);
    return os.str();
}
}  // namespace detail

/// Regularity, saturation and memory admissibility checks. The saturation
/// condition only warns: existence of solutions does not depend on it.
inline ValidationReport validate_hysteresis_inputs(const PreisachDensity& density, const MemoryCurve& curve,
                                                   const HysteresisValidationOptions& opt = {}) {
    ValidationReport report;
    const double U = curve.lambda_max();
    const std::size_t n = opt.samples;

    // density bounds on (0, U) x (-U, U)
    {
        const double lo = density.rho0(U);
        const double hi = density.rho1();
        std::string witness;
        bool ok = lo > 0.0;
        if (!ok) witness = detail::cat("rho0(", U, ") = ", lo, " is not positive (support smaller than the box?)");
        for (std::size_t i = 0; i < n && ok; ++i) {
            const double r = (static_cast<double>(i) + 0.5) / static_cast<double>(n) * U;
            for (std::size_t k = 0; k < n && ok; ++k) {
                const double v = -U + (static_cast<double>(k) + 0.5) / static_cast<double>(n) * 2.0 * U;
                const double rho = density(r, v);
                if (!(lo < rho && rho < hi)) {
                    ok = false;
                    witness = detail::cat("rho(", r, ", ", v, ") = ", rho, " outside (", lo, ", ", hi, ")");
                }
            }
        }
        report.add("density bounds rho0 < rho < rho1", ok ? CheckStatus::pass_sampled : CheckStatus::fail,
                   ok ? detail::cat(n, "x", n, " samples on (0,", U, ")x(-", U, ",", U, ")") : witness);
    }
    report.add("density Lipschitz in x", CheckStatus::pass, "density does not depend on x");

    // saturation in [0, 1]
    {
        const double wet = density.wetting_mass();
        const double cap = 1.0 - density.gbar();
        report.add("saturation bound (wetting)", wet <= cap + opt.tol ? CheckStatus::pass : CheckStatus::warn,
                   detail::cat("wetting integral ", wet, wet <= cap + opt.tol ? " <= " : " > ", "1-gbar = ", cap));
        const double dry = density.drying_mass();
        report.add("saturation bound (drying)", dry <= density.gbar() + opt.tol ? CheckStatus::pass : CheckStatus::warn,
                   detail::cat("drying integral ", dry, dry <= density.gbar() + opt.tol ? " <= " : " > ", "gbar = ",
                               density.gbar()));
    }

    // memory vanishes beyond lambda_max
    {
        bool ok = curve.tail() == 0.0;
        std::string witness = ok ? "" : detail::cat("xi(r) = ", curve.tail(), " for all r >= ", curve.last_corner());
        for (const auto& c : curve.corners()) {
            if (ok && c.r >= U && std::abs(c.xi) > opt.tol) {
                ok = false;
                witness = detail::cat("xi(", c.r, ") = ", c.xi, " with r >= lambda_max = ", U);
            }
        }
        report.add("memory vanishes for r >= lambda_max", ok ? CheckStatus::pass : CheckStatus::fail, witness);
    }

    // 1-Lipschitz in r
    {
        bool ok = true;
        std::string witness;
        for (std::size_t i = 0; i < curve.segment_count() && ok; ++i) {
            const double s = curve.segment(i).slope();
            if (std::abs(s) > 1.0 + 1e-9) {
                ok = false;
                witness = detail::cat("slope ", s, " on [", curve.segment(i).r1, ", ", curve.segment(i).r2, "]");
            }
        }
        report.add("memory 1-Lipschitz in r", ok ? CheckStatus::pass : CheckStatus::fail, witness);
    }

    // |xi(r)| <= (lambda_max - r)^+
    {
        bool ok = true;
        std::string witness;
        for (const auto& c : curve.corners()) {
            const double bound = std::max(U - c.r, 0.0);
            if (ok && std::abs(c.xi) > bound + opt.tol) {
                ok = false;
                witness = detail::cat("|xi(", c.r, ")| = ", std::abs(c.xi), " > ", bound);
            }
        }
        report.add("memory below wedge (lambda_max - r)^+", ok ? CheckStatus::pass : CheckStatus::warn, witness);
    }
    return report;
}

}  // namespace hystflow
