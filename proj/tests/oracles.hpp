#pragma once

// Brute-force reference computations used only by the tests. Nothing here
// shares code paths with the corner-list implementation beyond the density's
// pointwise value rho(r, v).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "hystflow/hysteresis/density.hpp"

namespace oracle {

/// Every play operator on a uniform r-grid, updated one by one.
class RGridMemory {
  public:
    RGridMemory(double r_max, std::size_t nodes = 2048) : r_(nodes), xi_(nodes, 0.0) {
        for (std::size_t i = 0; i < nodes; ++i) r_[i] = r_max * static_cast<double>(i) / static_cast<double>(nodes - 1);
    }

    template<class F>
    static RGridMemory from(double r_max, F&& init, std::size_t nodes = 2048) {
        RGridMemory m(r_max, nodes);
        for (std::size_t i = 0; i < nodes; ++i) m.xi_[i] = init(m.r_[i]);
        return m;
    }

    void apply(double u) {
        for (std::size_t i = 0; i < r_.size(); ++i) xi_[i] = std::min(u + r_[i], std::max(u - r_[i], xi_[i]));
    }

    const std::vector<double>& r() const { return r_; }
    const std::vector<double>& xi() const { return xi_; }

    /// Trapezoid in r of \int_0^{xi(r)} rho dv with a fine midpoint rule in v.
    double theta(const hystflow::PreisachDensity& d, std::size_t v_nodes = 400) const {
        auto inner = [&](double r, double x) {
            const double h = x / static_cast<double>(v_nodes);
            double s = 0.0;
            for (std::size_t k = 0; k < v_nodes; ++k) s += d(r, (static_cast<double>(k) + 0.5) * h);
            return s * h;
        };
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < r_.size(); ++i)
            sum += 0.5 * (r_[i + 1] - r_[i]) * (inner(r_[i], xi_[i]) + inner(r_[i + 1], xi_[i + 1]));
        return d.gbar() + sum;
    }

  private:
    std::vector<double> r_, xi_;
};

/// Both clauses of the discrete play variational inequality, with z on a
/// uniform grid of spacing dz over [-r, r].
inline bool play_vi_holds(double xi_prev, double u, double r, double xi, double dz, double tol = 1e-12) {
    if (std::abs(u - xi) > r + tol) return false;
    const auto steps = static_cast<std::size_t>(std::ceil(2.0 * r / dz));
    for (std::size_t k = 0; k <= steps; ++k) {
        const double z = std::min(-r + static_cast<double>(k) * dz, r);
        if ((xi - xi_prev) * (u - xi - z) < -tol) return false;
    }
    return true;
}

/// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n = 2000) {
    if (n % 2) ++n;
    const double h = (b - a) / static_cast<double>(n);
    double s = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + static_cast<double>(i) * h);
    return s * h / 3.0;
}

/// Composite 5-point Gauss-Legendre on each piece between the breakpoints
/// inside (a, b). Never samples a piece endpoint, so jumps there are harmless.
inline double gauss_split(const std::function<double(double)>& f, double a, double b, std::vector<double> breaks,
                          std::size_t n_per_piece = 200) {
    static constexpr double x[5] = {0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640,
                                    -0.9061798459386640};
    static constexpr double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
                                    0.2369268850561891};
    const double sign = b < a ? -1.0 : 1.0;
    if (b < a) std::swap(a, b);
    std::erase_if(breaks, [&](double t) { return !(t > a && t < b); });
    std::sort(breaks.begin(), breaks.end());
    breaks.push_back(b);
    double s = 0.0, lo = a;
    for (double hi : breaks) {
        const double h = (hi - lo) / static_cast<double>(n_per_piece);
        for (std::size_t i = 0; i < n_per_piece; ++i) {
            const double c = lo + (static_cast<double>(i) + 0.5) * h;
            for (int q = 0; q < 5; ++q) s += 0.5 * h * w[q] * f(c + 0.5 * h * x[q]);
        }
        lo = hi;
    }
    return sign * s;
}

}  // namespace oracle
