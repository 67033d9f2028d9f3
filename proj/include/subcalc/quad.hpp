#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace subcalc {

struct QuadFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Gauss(7)-Kronrod(15) nodes and weights on [-1,1].  Odd-index nodes are the
// embedded Gauss points.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGK15WeightsG[8] = {
    0.0, 0.129484966168870, 0.0, 0.279705391489277,
    0.0, 0.381830050505119, 0.0, 0.417959183673469};

template <class T>
double mag(const T& v) {
    if constexpr (std::is_same_v<T, std::complex<double>>) return std::abs(v);
    else return std::fabs(v);
}

}  // namespace detail

// One G7K15 panel.  Returns the Kronrod value; err is |K15 - G7|.
template <class F>
auto gk15_panel(F&& f, double a, double b, double* err) {
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    using R = decltype(f(mid));
    R k15{}, g7{};
    for (int i = 0; i < 8; ++i) {
        const double dx = hw * detail::kGK15Nodes[i];
        R fx = f(mid + dx);
        if (i < 7) fx += f(mid - dx);
        k15 += detail::kGK15WeightsK[i] * fx;
        g7 += detail::kGK15WeightsG[i] * fx;
    }
    k15 *= hw;
    g7 *= hw;
    if (err) *err = detail::mag<R>(k15 - g7);
    return k15;
}

// Adaptive bisection on [a,b].  Splits the worst panel first.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-10,
                        double abs_tol = 0.0, std::size_t max_panels = 20000) {
    using R = decltype(f(0.5 * (a + b)));
    struct Panel {
        double a, b, err;
        R val;
    };
    std::vector<Panel> panels;
    double e0;
    R v0 = gk15_panel(f, a, b, &e0);
    panels.push_back({a, b, e0, v0});

    auto total = [&panels]() {
        R s{};
        for (const auto& p : panels) s += p.val;
        return s;
    };
    auto total_err = [&panels]() {
        double s = 0;
        for (const auto& p : panels) s += p.err;
        return s;
    };

    while (panels.size() < max_panels) {
        R tot = total();
        double err = total_err();
        double goal = std::max(abs_tol, rel_tol * detail::mag<R>(tot));
        if (err <= goal || goal == 0.0) break;
        // split worst panel
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i)
            if (panels[i].err > panels[worst].err) worst = i;
        Panel p = panels[worst];
        if (p.b - p.a <= std::fabs(p.a) * 1e-15 + 1e-300) break;  // cannot refine
        const double m = 0.5 * (p.a + p.b);
        double e1, e2;
        R v1 = gk15_panel(f, p.a, m, &e1);
        R v2 = gk15_panel(f, m, p.b, &e2);
        panels[worst] = {p.a, m, e1, v1};
        panels.push_back({m, p.b, e2, v2});
    }
    return std::pair<R, double>(total(), total_err());
}

// Integral over [a, b] with 0 < a < b of an integrand whose scale varies by
// decades: geometric panels of ratio 2, each refined adaptively.  Robust when
// one wide panel would miss a boundary layer entirely.
template <class F>
std::pair<double, double> integrate_log_panels(F&& f, double a, double b,
                                               double rel_tol = 1e-10) {
    double total = 0.0, err = 0.0;
    double lo = a;
    while (lo < b) {
        double hi = std::min(b, 2.0 * lo);
        auto [v, e] = integrate_adaptive(f, lo, hi, rel_tol, 0.0, 512);
        total += v;
        err += e;
        lo = hi;
    }
    return {total, err};
}

// Integral over (0, a] with an integrable endpoint singularity at 0.
// Geometric panel halving toward 0; stops when the extrapolated remainder of
// the panel series is below tolerance.
template <class F>
std::pair<double, double> integrate_to_zero(F&& f, double a,
                                            double rel_tol = 1e-10,
                                            int max_halvings = 160) {
    double total = 0.0, err = 0.0;
    double hi = a;
    double prev = 0.0;
    for (int k = 0; k < max_halvings; ++k) {
        double lo = 0.5 * hi;
        auto [v, e] = integrate_adaptive(f, lo, hi, rel_tol, 0.0, 512);
        total += v;
        err += e;
        double av = std::fabs(v);
        if (k > 2 && av < rel_tol * std::fabs(total)) {
            // extrapolated geometric remainder
            double r = prev > 0 ? av / prev : 0.5;
            if (r < 1.0) {
                double rem = av * r / (1.0 - r);
                if (rem < rel_tol * std::fabs(total)) {
                    err += rem;
                    return {total, err};
                }
            }
        }
        prev = av;
        hi = lo;
    }
    // Ran out of halvings: the head of the last panel still mattered.
    if (std::fabs(prev) > 1e-6 * std::fabs(total))
        throw QuadFailure("integrate_to_zero: singular head did not converge");
    return {total, err};
}

// Integral over [a, infinity) of a (eventually) decaying non-oscillatory
// integrand.  Geometric panel doubling with extrapolated tail bound.
template <class F>
std::pair<double, double> integrate_decay(F&& f, double a,
                                          double rel_tol = 1e-10,
                                          int max_doublings = 200) {
    if (!(a > 0)) throw QuadFailure("integrate_decay: need a > 0");
    double total = 0.0, err = 0.0;
    double lo = a;
    double prev = -1.0;
    for (int k = 0; k < max_doublings; ++k) {
        double hi = 2.0 * lo;
        auto [v, e] = integrate_adaptive(f, lo, hi, rel_tol, 0.0, 512);
        total += v;
        err += e;
        double av = std::fabs(v);
        if (k > 1 && prev >= 0.0 && av <= prev) {
            if (av == 0.0 && prev == 0.0) return {total, err};
            double r = prev > 0 ? av / prev : 0.0;
            if (r < 0.9 && av * r / (1.0 - r) <=
                               rel_tol * std::max(std::fabs(total), 1e-300)) {
                err += av * r / (1.0 - r);
                return {total, err};
            }
        }
        prev = av;
        lo = hi;
        if (lo > 1e300) break;
    }
    throw QuadFailure("integrate_decay: tail did not converge");
}

// Integral over [a, infinity) of amplitude(x) * cos(phase(x)) style
// integrands whose phase eventually advances ~linearly.  Sums half-period
// panels and accelerates the alternating tail with iterated averaging
// (Euler transform).
template <class F>
std::pair<double, double> integrate_oscillatory_tail(F&& f, double a,
                                                     double half_period,
                                                     double abs_tol,
                                                     std::size_t max_half_periods = 6000) {
    double err = 0.0;
    std::vector<double> partial;  // partial sums of half-period panels
    double sum = 0.0;
    double lo = a;
    for (std::size_t k = 0; k < max_half_periods; ++k) {
        double hi = lo + half_period;
        auto [v, e] = integrate_adaptive(f, lo, hi, 1e-12, abs_tol * 1e-2, 256);
        err += e;
        sum += v;
        partial.push_back(sum);
        lo = hi;
        if (partial.size() >= 12 && (k & 1) == 1) {
            // iterated averaging of the last partial sums (Euler transform)
            std::vector<double> avg(partial.end() - 12, partial.end());
            for (std::size_t m = avg.size(); m > 1; --m)
                for (std::size_t i = 0; i + 1 < m; ++i)
                    avg[i] = 0.5 * (avg[i] + avg[i + 1]);
            double accel = avg[0];
            double spread = std::fabs(partial.back() - partial[partial.size() - 2]);
            double tail_err = spread / 256.0 + 1e-300;
            if (tail_err < abs_tol) return {accel, err + tail_err};
        }
    }
    throw QuadFailure("integrate_oscillatory_tail: no convergence within budget");
}

}  // namespace subcalc
