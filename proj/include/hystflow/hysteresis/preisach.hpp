#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hystflow/errors.hpp"
#include "hystflow/hysteresis/density.hpp"
#include "hystflow/hysteresis/memory_curve.hpp"

namespace hystflow {

/// One step of the time-discrete play operator with threshold r.
inline double play_update(double xi_prev, double u, double r) {
    if (!(r >= 0.0)) throw InvalidThreshold("play_update: threshold must be >= 0");
    return std::min(u + r, std::max(u - r, xi_prev));
}

namespace detail {

/// Where the new wedge u -/+ r meets the old memory.
struct WipeFront {
    double r0;         // end of the region overwritten by the wedge
    std::size_t next;  // first old corner strictly beyond r0
};

/// direction = +1 for a rising input, -1 for a falling one. Relies on the
/// curve being 1-Lipschitz, so that the gap between the curve and the wedge
/// is monotone in r and the first sign change is the only one.
inline WipeFront find_wipe(const MemoryCurve& m, double u, int direction) {
    const auto& c = m.corners();
    const double s = direction;
    auto gap = [&](const Corner& k) { return s * (k.xi - u) + k.r; };
    double g_prev = gap(c[0]);
    for (std::size_t k = 1; k < c.size(); ++k) {
        const double gk = gap(c[k]);
        if (gk >= 0.0) {
            if (gk == 0.0) return {c[k].r, k + 1};
            const double t = -g_prev / (gk - g_prev);
            const double r0 = std::clamp(c[k - 1].r + t * (c[k].r - c[k - 1].r), c[k - 1].r, c[k].r);
            return {r0, r0 < c[k].r ? k : k + 1};
        }
        g_prev = gk;
    }
    const double r0 = s * (u - m.tail());
    return {std::max(r0, c.back().r), c.size()};
}

inline int direction_of(const MemoryCurve& m, double u) {
    if (u > m.input()) return 1;
    if (u < m.input()) return -1;
    return 0;
}

}  // namespace detail

/// Apply the input value u to every play operator at once:
/// r -> min(u + r, max(u - r, xi(r))). Corners under the new wedge are
/// wiped out; the result satisfies xi(0) = u.
inline MemoryCurve memory_update(const MemoryCurve& curve, double u) {
    const int dir = detail::direction_of(curve, u);
    if (dir == 0) return curve;
    const auto w = detail::find_wipe(curve, u, dir);
    const auto& old = curve.corners();

    std::vector<Corner> out;
    out.reserve(old.size() - std::min(w.next, old.size()) + 2);
    out.push_back({0.0, u});
    const Corner knee{w.r0, u - dir * w.r0};
    const bool collinear = w.next < old.size()
                           && std::abs(old[w.next].xi - (u - dir * old[w.next].r))
                                  <= 1e-14 * (1.0 + std::abs(u) + old[w.next].r);
    if (w.r0 > 0.0 && !collinear) out.push_back(knee);
    for (std::size_t k = w.next; k < old.size(); ++k) out.push_back(old[k]);
    return MemoryCurve(std::move(out), curve.lambda_max());
}

/// Apply a whole input sequence.
inline MemoryCurve memory_update(MemoryCurve curve, std::span<const double> inputs) {
    for (double u : inputs) curve = memory_update(curve, u);
    return curve;
}

/// theta = G-bar + \int_0^inf \int_0^{xi(r)} rho(r, v) dv dr
inline double preisach_output(const MemoryCurve& curve, const PreisachDensity& density) {
    double theta = density.gbar();
    for (std::size_t i = 0; i < curve.segment_count(); ++i) theta += density.segment_inner(curve.segment(i));
    if (curve.tail() != 0.0) {
        const double r_end = density.r_support();
        if (!std::isfinite(r_end))
            throw DomainError("preisach_output: memory does not vanish for large r and the density is unbounded in r");
        theta += density.segment_inner({curve.last_corner(), curve.tail(), std::max(r_end, curve.last_corner()),
                                        curve.tail()});
    }
    return theta;
}

/// \int_0^inf Psi(r, xi(r)) dr with Psi(r, xi) = \int_0^xi v rho(r, v) dv.
inline double memory_energy(const MemoryCurve& curve, const PreisachDensity& density) {
    double e = 0.0;
    for (std::size_t i = 0; i < curve.segment_count(); ++i) e += density.segment_moment(curve.segment(i));
    if (curve.tail() != 0.0) {
        const double r_end = density.r_support();
        if (!std::isfinite(r_end)) throw DomainError("memory_energy: memory does not vanish for large r");
        e += density.segment_moment({curve.last_corner(), curve.tail(), std::max(r_end, curve.last_corner()),
                                     curve.tail()});
    }
    return e;
}

/// Change of the Preisach output and its slope d(theta)/du when the input
/// moves from curve.input() to u in one monotone step. Allocation-free
/// equivalent of preisach_output(memory_update(curve, u)) - preisach_output(curve).
struct BranchEval {
    double delta_theta = 0.0;
    double slope = 0.0;
};

inline BranchEval branch_increment(const MemoryCurve& curve, double u, const PreisachDensity& density) {
    const int dir = detail::direction_of(curve, u);
    if (dir == 0) return {};
    const auto w = detail::find_wipe(curve, u, dir);
    const auto& c = curve.corners();
    const double s = dir;
    double delta = 0.0;
    for (std::size_t i = 0; i < c.size() && c[i].r < w.r0; ++i) {
        const double ra = c[i].r;
        double rb, xb;
        if (i + 1 < c.size() && c[i + 1].r < w.r0) {
            rb = c[i + 1].r;
            xb = c[i + 1].xi;
        } else {
            rb = w.r0;
            xb = u - s * w.r0;
        }
        delta += density.segment_inner({ra, u - s * ra, rb, u - s * rb}) - density.segment_inner({ra, c[i].xi, rb, xb});
    }
    const double slope = density.line({0.0, u, w.r0, u - s * w.r0});
    return {delta, slope};
}

/// Primary wetting curve without offset: Gamma0(u) = \int_0^u \int_0^{u-r} rho dv dr.
inline double primary_wetting(const PreisachDensity& density, double u) {
    if (!(u >= 0.0)) throw DomainError("primary_wetting: u must be >= 0");
    if (u == 0.0) return 0.0;
    return density.segment_inner({0.0, u, u, 0.0});
}

/// Memory at the last turning point together with the input there.
struct BranchPoint {
    MemoryCurve memory;
    double u_anchor = 0.0;

    explicit BranchPoint(MemoryCurve m) : memory(std::move(m)), u_anchor(memory.input()) {}
};

enum class BranchDirection { ascending, descending };

/// Preisach output after a single monotone move from the anchor to u.
inline double branch_value(const BranchPoint& anchor, double u, BranchDirection dir, const PreisachDensity& density) {
    if (dir == BranchDirection::ascending && u < anchor.u_anchor)
        throw DomainError("branch_value: ascending branch needs u >= anchor input");
    if (dir == BranchDirection::descending && u > anchor.u_anchor)
        throw DomainError("branch_value: descending branch needs u <= anchor input");
    return preisach_output(memory_update(anchor.memory, u), density);
}

enum class InitialMemoryMode { virgin, wedge };

/// Initial memory compatible with u0: sign(u0) (|u0| - r)^+ for the wedge
/// mode, the zero curve for the virgin mode (which requires u0 = 0).
inline MemoryCurve make_initial_memory(double u0, double lambda_max, InitialMemoryMode mode) {
    if (!(lambda_max > 0.0)) throw DomainError("make_initial_memory: lambda_max must be positive");
    if (!(std::abs(u0) <= lambda_max))
        throw DomainError("make_initial_memory: |u0| exceeds lambda_max, incompatible with the L-infinity bound");
    if (mode == InitialMemoryMode::virgin) {
        if (u0 != 0.0) throw DomainError("make_initial_memory: virgin memory requires u0 = 0");
        return MemoryCurve(lambda_max);
    }
    if (u0 == 0.0) return MemoryCurve(lambda_max);
    return MemoryCurve({{0.0, u0}, {std::abs(u0), 0.0}}, lambda_max);
}

/// Ascending branch from the completely dry state at -U.
inline double limit_wetting(const PreisachDensity& density, double u, double U) {
    const MemoryCurve dry = memory_update(MemoryCurve(U), -U);
    return preisach_output(memory_update(dry, u), density);
}

/// Descending branch from the completely wet state at +U.
inline double limit_drying(const PreisachDensity& density, double u, double U) {
    const MemoryCurve wet = memory_update(MemoryCurve(U), U);
    return preisach_output(memory_update(wet, u), density);
}

}  // namespace hystflow
