#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace namma::detail {

struct no_root_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bracketed hybrid secant/bisection root finder. Requires f(lo), f(hi) of
// opposite sign (zero endpoint values are returned directly).
template <typename F>
inline double find_root(const F& f, double lo, double hi, double xtol = 1e-13,
                        int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        throw no_root_error("find_root: bracket does not straddle a root");

    for (int it = 0; it < max_iter; ++it) {
        // Secant proposal, rejected if it leaves the bracket interior.
        double x = hi - fhi * (hi - lo) / (fhi - flo);
        const double mid = 0.5 * (lo + hi);
        if (!(x > lo && x < hi)) x = mid;
        // Alternate with bisection to guarantee bracket shrinkage.
        if (it % 2 == 1) x = mid;
        const double fx = f(x);
        if (fx == 0.0 || hi - lo < xtol * (1.0 + std::abs(x))) return x;
        if (flo * fx < 0.0) {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace namma::detail
