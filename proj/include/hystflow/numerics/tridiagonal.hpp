#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hystflow::numerics {

/// Thomas algorithm. lower[i] couples row i to i-1 (lower[0] unused),
/// upper[i] couples row i to i+1 (upper[n-1] unused). No pivoting; the
/// callers only pass diagonally dominant matrices.
inline void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                              std::span<const double> upper, std::span<const double> rhs,
                              std::span<double> x) {
    const std::size_t n = diag.size();
    std::vector<double> c(n), d(n);
    c[0] = n > 1 ? upper[0] / diag[0] : 0.0;
    d[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double m = diag[i] - lower[i] * c[i - 1];
        c[i] = i + 1 < n ? upper[i] / m : 0.0;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
}

}  // namespace hystflow::numerics
