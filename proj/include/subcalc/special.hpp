#pragma once

#include <cmath>
#include <stdexcept>

namespace subcalc {

// log Gamma for x > 0.  libm's lgamma is accurate to ~1 ulp here; keep a
// named wrapper so call sites read like the math.
inline double log_gamma(double x) {
    if (!(x > 0)) throw std::domain_error("log_gamma: need x > 0");
    return std::lgamma(x);
}

// Regularized lower incomplete gamma P(a, x) = gamma(a,x)/Gamma(a).
// Series for x < a+1, continued fraction otherwise.
inline double gamma_p(double a, double x) {
    if (!(a > 0) || x < 0) throw std::domain_error("gamma_p: bad arguments");
    if (x == 0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    // Lentz continued fraction for Q(a,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    double q = std::exp(-x + a * std::log(x) - lg) * h;
    return 1.0 - q;
}

// 1 - e^{-x} - x e^{-x}, stable for small x (the H-function integrand core).
inline double one_minus_1px_emx(double x) {
    if (x > 1e-3) return 1.0 - (1.0 + x) * std::exp(-x);
    // sum_{m>=2} (-1)^m (m-1)/m! x^m
    const double x2 = x * x;
    return x2 * (0.5 + x * (-1.0 / 3.0 + x * (0.125 + x * (-1.0 / 30.0 + x / 144.0))));
}

// 1 - e^{-x}, stable for small x.
inline double one_minus_emx(double x) { return -std::expm1(-x); }

}  // namespace subcalc
