#pragma once

#include <cmath>

#include "ccsim/errors.hpp"

namespace ccsim {

struct RootOptions {
    double rel_tol = 1e-12; ///< residual tolerance relative to `scale`
    int max_iter = 50;
    double scale = 1.0; ///< residual normalization
};

/// Safeguarded Newton iteration for an increasing function with a sign
/// change on [lo, hi]: steps that leave the bracket (or hit a vanishing
/// derivative) fall back to bisection, so convergence is guaranteed.
template <class F, class DF>
double newton_bisection(F&& f, DF&& df, double lo, double hi, double x0,
                        const RootOptions& opt = {}) {
    double x = (x0 > lo && x0 < hi) ? x0 : 0.5 * (lo + hi);
    for (int it = 0; it < opt.max_iter; ++it) {
        const double fx = f(x);
        if (std::abs(fx) <= opt.rel_tol * opt.scale) return x;
        if (fx > 0.0)
            hi = x;
        else
            lo = x;
        const double d = df(x);
        double next = x - fx / d;
        if (!(d != 0.0) || !std::isfinite(next) || next <= lo || next >= hi)
            next = 0.5 * (lo + hi);
        if (next == x) return x; // interval exhausted at double resolution
        x = next;
    }
    throw SolverError("newton_bisection: no convergence within iteration limit");
}

} // namespace ccsim
