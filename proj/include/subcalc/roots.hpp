#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace subcalc {

struct RootFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solves f(x) = target for a monotone f on (0, inf).  Brackets by geometric
// expansion from x0 (factor 4, bounded number of steps), then bisects on the
// log axis to relative tolerance.
template <class F>
double invert_monotone(F&& f, double target, bool increasing, double x0 = 1.0,
                       double rel_tol = 1e-12, int max_expand = 200) {
    if (!(x0 > 0)) throw RootFailure("invert_monotone: bad start point");
    auto g = [&](double x) { return increasing ? f(x) - target : target - f(x); };
    // g is increasing in x; find a sign change.
    double lo = x0, hi = x0;
    double glo = g(lo), ghi = glo;
    if (glo > 0) {
        for (int i = 0; i < max_expand && glo > 0; ++i) {
            hi = lo;
            lo /= 4.0;
            glo = g(lo);
        }
        if (glo > 0) throw RootFailure("invert_monotone: value out of range (low)");
    } else {
        for (int i = 0; i < max_expand && ghi <= 0; ++i) {
            lo = hi;
            hi *= 4.0;
            ghi = g(hi);
        }
        if (ghi <= 0) throw RootFailure("invert_monotone: value out of range (high)");
    }
    if (glo == 0.0) return lo;
    // bisection in log space
    for (int i = 0; i < 200; ++i) {
        double mid = std::sqrt(lo * hi);
        if (!(mid > lo && mid < hi)) break;
        double gm = g(mid);
        if (gm > 0)
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= rel_tol * hi) break;
    }
    return std::sqrt(lo * hi);
}

// Bisection for a continuous f with f(lo), f(hi) of opposite signs.
template <class F>
double bisect(F&& f, double lo, double hi, double rel_tol = 1e-12,
              double abs_tol = 0.0) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw RootFailure("bisect: endpoints do not bracket a root");
    for (int i = 0; i < 300; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo <= std::max(abs_tol, rel_tol * std::fabs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace subcalc
