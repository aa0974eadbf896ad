#pragma once

#include <cmath>
#include <utility>

#include "hystflow/errors.hpp"

namespace hystflow::numerics {

/// Bisection for a nondecreasing f on [lo, hi]; returns the boundary of
/// {x : f(x) < 0} (the leftmost root) to within `tol`.
template<class F>
double leftmost_root(F& f, double lo, double hi, double tol, int max_iters = 200) {
    for (int i = 0; i < max_iters && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

/// Rightmost root of a nondecreasing f: boundary of {x : f(x) <= 0}.
template<class F>
double rightmost_root(F& f, double lo, double hi, double tol, int max_iters = 200) {
    for (int i = 0; i < max_iters && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return lo;
}

/// Root of a nondecreasing scalar function closest to `anchor`.
///
/// The zero set of a monotone function is a closed interval, possibly
/// degenerate. When it is a proper interval the endpoint nearest to the
/// anchor is returned; if the anchor itself is a root it is returned
/// unchanged. The bracket is grown geometrically from the anchor.
template<class F>
double monotone_root_nearest(F&& f, double anchor, double tol, double initial_step = 1e-3,
                             int max_expand = 80) {
    const double f0 = f(anchor);
    if (f0 == 0.0) return anchor;
    double step = initial_step;
    if (f0 > 0.0) {
        double hi = anchor;
        double lo = anchor - step;
        int k = 0;
        while (f(lo) > 0.0) {
            if (++k > max_expand) throw NonConvergence("nodal root not bracketed below", f0, k);
            hi = lo;
            step *= 2.0;
            lo = anchor - step;
        }
        return rightmost_root(f, lo, hi, tol);
    }
    double lo = anchor;
    double hi = anchor + step;
    int k = 0;
    while (f(hi) < 0.0) {
        if (++k > max_expand) throw NonConvergence("nodal root not bracketed above", f0, k);
        lo = hi;
        step *= 2.0;
        hi = anchor + step;
    }
    return leftmost_root(f, lo, hi, tol);
}

}  // namespace hystflow::numerics
