#pragma once

// Pointwise inequality suites shared by the unit tests and the acceptance
// runner: the basic H bounds, the w/H inverse ordering, the b-function
// sandwich and difference bound, the theta contract, and inversion round
// trips, each on log grids.

#include <cmath>
#include <string>
#include <vector>

#include "subcalc/phi_evaluator.hpp"
#include "subcalc/quad.hpp"

namespace subcalc::suite {

struct Violation {
    std::string rule;
    double arg;
    double lhs, rhs;
};

inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return g;
}

// (basicH1), (basicH2), (e:CK21) and the H doubling bound on a lambda grid
inline std::vector<Violation> h_bounds(const PhiEvaluator& e, int n = 64,
                                       double lo = 1e-3, double hi = 1e3) {
    std::vector<Violation> out;
    const double E = std::exp(1.0);
    const double sup = e.model().support_sup();
    auto s2nu = [&](double l) {
        double cap = std::min(1.0 / l, sup);
        return integrate_to_zero(
                   [&](double s) { return s * s * e.model().density(s); },
                   cap, 1e-9)
            .first;
    };
    auto sw = [&](double l) {
        double cap = 1.0 / l;
        return integrate_to_zero([&](double s) { return s * e.w(s); }, cap,
                                 1e-8)
            .first;
    };
    auto grid = log_grid(lo, hi, n);
    const double slack = 1.0 + 1e-7;
    for (double l : grid) {
        double H = e.H(l);
        double b1 = l * l / (2.0 * E) * s2nu(l);
        if (!(H * slack >= b1)) out.push_back({"basicH1", l, H, b1});
        double b2 = (E - 2.0) / E * e.w(1.0 / l);
        if (!(H * slack >= b2)) out.push_back({"basicH2", l, H, b2});
        double m = l * l * sw(l);
        if (!(H * slack >= m / E)) out.push_back({"CK21.lower", l, H, m / E});
        if (!(H <= 5.0 * m * slack)) out.push_back({"CK21.upper", l, H, 5 * m});
    }
    // H(R) <= (R/r)^2 H(r) on ordered pairs
    for (std::size_t i = 0; i + 1 < grid.size(); i += 2) {
        double r = grid[i], R = grid[i + 1];
        double lhs = e.H(R), rhs = (R / r) * (R / r) * e.H(r);
        if (!(lhs <= rhs * slack)) out.push_back({"H.doubling", r, lhs, rhs});
    }
    return out;
}

// (wHinverse), (estib), the Lemma-2.5 difference bound and the theta
// contract on a t grid
inline std::vector<Violation> t_bounds(const PhiEvaluator& e, int n = 64,
                                       double lo = 0.1, double hi = 100.0) {
    std::vector<Violation> out;
    const double E = std::exp(1.0);
    const double cstar = (E - 2.0) / (E * E - E);
    const double slack = 1.0 + 1e-7;
    for (double t : log_grid(lo, hi, n)) {
        double winv = e.invert(PhiEvaluator::Fn::W, 2.0 * E / t);
        double scale = e.spatial_scale(t);
        if (!(winv <= scale * slack))
            out.push_back({"wHinverse", t, winv, scale});
        // t b(t) sandwich against 1/phi^{-1}: the paper prints the scaling
        // constant on the wrong side of the fraction (its form fails on the
        // plain stable subordinator); the true orientation is
        //   1/phi^{-1}(1/(c* t)) <= t b(t) <= 1/phi^{-1}(1/t).
        double tb = t * e.b(t);
        double lo_b = 1.0 / e.invert(PhiEvaluator::Fn::Phi, 1.0 / (cstar * t));
        double hi_b = 1.0 / e.invert(PhiEvaluator::Fn::Phi, 1.0 / t);
        if (!(lo_b <= tb * slack)) out.push_back({"estib.lower", t, lo_b, tb});
        if (!(tb <= hi_b * slack)) out.push_back({"estib.upper", t, tb, hi_b});
        // Lemma 2.5 with (a1, a2) = (1, 4)
        double diff = t * e.b(t) - t * e.b(t / 4.0);
        double bound = (2 * E * E - 4 * E + 1) / (E - 2.0) * 4.0 /
                       e.invert(PhiEvaluator::Fn::H, 1.0 / t);
        if (!(diff <= bound * slack))
            out.push_back({"L2.5.upper", t, diff, bound});
        // theta contract: t theta H(1/theta) <= y v scale, equality on the
        // middle branch
        double D = e.D(t);
        for (double y : {0.0, 0.5 * scale, scale, 0.5 * (scale + D), D,
                         2.0 * D}) {
            auto th = e.theta(t, y);
            double g = t * th.theta * e.H(1.0 / th.theta);
            double cap = std::max(y, scale);
            if (!(g <= cap * (1.0 + 1e-6)))
                out.push_back({"theta.contract", t, g, cap});
            if (y >= scale && y <= D && th.branch == ThetaBranch::Root &&
                !(std::fabs(g - y) <= 1e-6 * std::max(y, 1e-300)))
                out.push_back({"theta.root", t, g, y});
        }
    }
    return out;
}

// inversion round trips to relative 1e-8
inline std::vector<Violation> roundtrips(const PhiEvaluator& e, int n = 16) {
    std::vector<Violation> out;
    for (double t : log_grid(0.2, 50.0, n)) {
        struct Probe {
            PhiEvaluator::Fn fn;
            double v;
            const char* name;
        };
        double w_probe = 2.0 * std::exp(1.0) / t;
        Probe probes[] = {{PhiEvaluator::Fn::H, 1.0 / t, "H"},
                          {PhiEvaluator::Fn::Phi, 1.0 / t, "phi"},
                          {PhiEvaluator::Fn::W, w_probe, "w"}};
        for (const auto& p : probes) {
            double x = e.invert(p.fn, p.v);
            double back = p.fn == PhiEvaluator::Fn::H ? e.H(x)
                          : p.fn == PhiEvaluator::Fn::Phi
                              ? e.phi(x)
                              : e.w(x);
            if (!(std::fabs(back - p.v) <= 1e-8 * p.v))
                out.push_back({std::string("roundtrip.") + p.name, t, back,
                               p.v});
        }
        // phi' needs a value inside the range
        double p0 = e.phi_prime_at_zero();
        double target = std::isfinite(p0) ? 0.5 * p0 : e.phi_deriv(1.0, 1);
        double x = e.invert(PhiEvaluator::Fn::PhiPrime, target);
        double back = e.phi_deriv(x, 1);
        if (!(std::fabs(back - target) <= 1e-8 * target))
            out.push_back({"roundtrip.phi_prime", t, back, target});
    }
    return out;
}

}  // namespace subcalc::suite
