#include "subcalc/phi_evaluator.hpp"

#include <algorithm>
#include <cmath>

#include "subcalc/quad.hpp"
#include "subcalc/roots.hpp"
#include "subcalc/special.hpp"

namespace subcalc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

enum CacheKind {
    kPhi0 = 0,  // kPhi0..kPhi3 are phi^{(n)}
    kH = 4,
    kW = 5,
    kB = 6,
    kD = 7,
    kScriptH = 8,
};
}  // namespace

PhiEvaluator::PhiEvaluator(LevyModel model, double quad_tol)
    : model_(std::make_shared<const LevyModel>(std::move(model))),
      quad_tol_(quad_tol) {}

template <class F>
double PhiEvaluator::cached(int kind, double arg, F&& compute) const {
    {
        std::lock_guard lk(mu_);
        auto it = cache_.find({kind, arg});
        if (it != cache_.end()) return it->second;
    }
    double v = compute();
    std::lock_guard lk(mu_);
    cache_.emplace(std::make_pair(kind, arg), v);
    return v;
}

// ---------------------------------------------------------------------------
// phi and derivatives
// ---------------------------------------------------------------------------

double PhiEvaluator::phi_quad(double lambda) const {
    const auto& m = *model_;
    const double sup = m.support_sup();
    const double split = std::min(1.0 / lambda, sup);
    auto f = [&](double s) { return one_minus_emx(lambda * s) * m.density(s); };
    double total = integrate_to_zero(f, split, quad_tol_).first;
    if (sup > split) {
        // e^{-lambda s} < 1e-18 beyond the cut; the remainder is w(s_cut)
        double s_cut = std::min(sup, 42.0 / lambda);
        if (s_cut > split)
            total += integrate_log_panels(f, split, s_cut, quad_tol_).first;
        if (sup > s_cut) total += w(s_cut);
    }
    return total;
}

double PhiEvaluator::deriv_quad(double lambda, int n) const {
    const auto& m = *model_;
    const double sup = m.support_sup();
    const double split = std::min(1.0 / lambda, sup);
    auto f = [&](double s) {
        return std::pow(s, n) * std::exp(-lambda * s) * m.density(s);
    };
    double total = integrate_to_zero(f, split, quad_tol_).first;
    double s_cut = std::min(sup, (60.0 + 10.0 * n) / lambda);
    if (s_cut > split)
        total += integrate_log_panels(f, split, s_cut, quad_tol_).first;
    return total;
}

double PhiEvaluator::phi_deriv(double lambda, int n) const {
    if (n < 0 || n > 3) throw ModelError("phi_deriv: order must be 0..3");
    if (lambda == 0.0 && n == 0) return 0.0;
    if (!(lambda > 0)) throw ModelError("phi_deriv: need lambda > 0");
    const auto& m = *model_;
    if (n == 0) {
        if (m.has_laplace()) return m.laplace(lambda);
        return cached(kPhi0, lambda, [&] { return phi_quad(lambda); });
    }
    if (m.has_laplace_derivs()) return m.laplace_deriv(lambda, n);
    double mag = cached(kPhi0 + n, lambda, [&] { return deriv_quad(lambda, n); });
    return n % 2 == 1 ? mag : -mag;  // (-1)^{n+1} sign
}

double PhiEvaluator::H_quad(double lambda) const {
    const auto& m = *model_;
    const double sup = m.support_sup();
    const double split = std::min(1.0 / lambda, sup);
    auto f = [&](double s) {
        return one_minus_1px_emx(lambda * s) * m.density(s);
    };
    double total = integrate_to_zero(f, split, quad_tol_).first;
    if (sup > split) {
        double s_cut = std::min(sup, 45.0 / lambda);
        if (s_cut > split)
            total += integrate_log_panels(f, split, s_cut, quad_tol_).first;
        if (sup > s_cut) total += w(s_cut);
    }
    return total;
}

double PhiEvaluator::H(double lambda) const {
    if (lambda == 0.0) return 0.0;
    if (!(lambda > 0)) throw ModelError("H: need lambda >= 0");
    if (model_->has_closed_H()) return model_->closed_H(lambda);
    return cached(kH, lambda, [&] { return H_quad(lambda); });
}

double PhiEvaluator::w(double r) const {
    if (!(r > 0)) throw ModelError("w: need r > 0");
    if (model_->has_closed_tail() || r >= model_->support_sup())
        return model_->tail(r);
    return cached(kW, r, [&] { return model_->tail(r); });
}

double PhiEvaluator::phi_prime_at_zero() const {
    {
        std::lock_guard lk(mu_);
        if (phi_prime0_ >= 0.0) return phi_prime0_;
    }
    const auto& m = *model_;
    double v;
    // int_0^inf s nu(s) ds; detect divergence by non-decaying doubling panels
    auto f = [&](double s) { return s * m.density(s); };
    double head = integrate_to_zero(f, std::min(1.0, m.support_sup()), 1e-9).first;
    if (m.support_sup() <= 1.0) {
        v = head;
    } else {
        try {
            v = head + integrate_decay(f, 1.0, 1e-9, 140).first;
        } catch (const QuadFailure&) {
            v = kInf;
        }
    }
    std::lock_guard lk(mu_);
    phi_prime0_ = v;
    return v;
}

double PhiEvaluator::invert(Fn which, double v) const {
    if (!(v > 0)) throw ModelError("invert: need v > 0");
    switch (which) {
        case Fn::H:
            return invert_monotone([this](double l) { return H(l); }, v, true);
        case Fn::Phi:
            return invert_monotone([this](double l) { return phi(l); }, v, true);
        case Fn::PhiPrime:
            return invert_monotone(
                [this](double l) { return phi_deriv(l, 1); }, v, false);
        case Fn::W:
            return invert_monotone([this](double r) { return w(r); }, v, false);
    }
    throw ModelError("invert: unknown function");
}

double PhiEvaluator::b(double t) const {
    if (!(t > 0)) throw ModelError("b: need t > 0");
    return cached(kB, t,
                  [&] { return phi_deriv(invert(Fn::H, 1.0 / t), 1); });
}

double PhiEvaluator::spatial_scale(double t) const {
    return 1.0 / invert(Fn::H, 1.0 / t);
}

SaddleState PhiEvaluator::saddle(double t, double x) const {
    if (!(t > 0) || !(x > 0)) throw ModelError("saddle: need t, x > 0");
    double p0 = phi_prime_at_zero();
    if (std::isfinite(p0) && x >= t * p0)
        throw ModelError("saddle: x at or beyond t*phi'(0)");
    SaddleState st;
    st.t = t;
    st.x = x;
    st.sigma = invert(Fn::PhiPrime, x / t);
    st.H_sigma = H(st.sigma);
    st.neg_phi2 = -phi_deriv(st.sigma, 2);
    double scale = std::sqrt(t * st.neg_phi2);
    st.script_T = st.sigma * scale;
    st.script_T0 = std::max(sigma0_, st.sigma) * scale;
    return st;
}

// ---------------------------------------------------------------------------
// D and theta
// ---------------------------------------------------------------------------

const PhiEvaluator::ThetaGrid& PhiEvaluator::theta_grid(double t) const {
    {
        std::lock_guard lk(mu_);
        auto it = theta_cache_.find(t);
        if (it != theta_cache_.end()) return it->second;
    }
    ThetaGrid g;
    g.lo = invert(Fn::W, 2.0 * std::exp(1.0) / t);
    g.hi = spatial_scale(t);
    if (g.lo > g.hi) g.lo = g.hi;  // (wHinverse) guarantees lo <= hi
    const int n = 512;
    g.s.resize(n);
    g.g.resize(n);
    const double llo = std::log(g.lo), lhi = std::log(g.hi);
    for (int i = 0; i < n; ++i) {
        double s = std::exp(llo + (lhi - llo) * i / (n - 1));
        g.s[i] = s;
        g.g[i] = t * s * H(1.0 / s);
    }
    // refine the maximum by golden-section between the grid neighbors
    std::size_t im = 0;
    for (std::size_t i = 1; i < g.g.size(); ++i)
        if (g.g[i] > g.g[im]) im = i;
    double a = g.s[im > 0 ? im - 1 : im];
    double c = g.s[std::min<std::size_t>(im + 1, n - 1)];
    auto gv = [&](double s) { return t * s * H(1.0 / s); };
    const double gr = 0.6180339887498949;
    double x1 = c - gr * (c - a), x2 = a + gr * (c - a);
    double f1 = gv(x1), f2 = gv(x2);
    while (c - a > 1e-8 * c) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (c - a);
            f2 = gv(x2);
        } else {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - gr * (c - a);
            f1 = gv(x1);
        }
    }
    double sm = 0.5 * (a + c);
    double gm = gv(sm);
    g.arg_max = gm > g.g[im] ? sm : g.s[im];
    g.D = std::max(gm, g.g[im]);
    std::lock_guard lk(mu_);
    return theta_cache_.emplace(t, std::move(g)).first->second;
}

double PhiEvaluator::D(double t) const {
    if (!(t > 0)) throw ModelError("D: need t > 0");
    return theta_grid(t).D;
}

ThetaResult PhiEvaluator::theta(double t, double y) const {
    if (!(t > 0) || y < 0) throw ModelError("theta: need t > 0, y >= 0");
    const ThetaGrid& g = theta_grid(t);
    ThetaResult res;
    res.t = t;
    res.y = y;
    if (y < g.hi) {
        res.theta = g.hi;
        res.branch = ThetaBranch::BelowMode;
        return res;
    }
    if (y > g.D) {
        res.theta = g.lo;
        res.branch = ThetaBranch::BeyondD;
        return res;
    }
    res.branch = ThetaBranch::Root;
    // minimal root of t s H(1/s) = y: first sign-change bracket left to right
    auto h = [&](double s) { return t * s * H(1.0 / s) - y; };
    double h0 = g.g[0] - y;
    if (h0 == 0.0) {
        res.theta = g.s[0];
        return res;
    }
    for (std::size_t i = 1; i < g.s.size(); ++i) {
        double hi = g.g[i] - y;
        if (hi == 0.0) {
            res.theta = g.s[i];
            return res;
        }
        if ((hi > 0) != (h0 > 0)) {
            res.theta = bisect(h, g.s[i - 1], g.s[i], 1e-10);
            return res;
        }
        h0 = hi;
    }
    if (g.g[0] - y > 0.0) {
        // g sits above y across the grid and only descends to y at the right
        // endpoint: the minimal root is the endpoint itself
        res.theta = g.hi;
        return res;
    }
    // g stays below y on the grid: y lies between the grid maximum and the
    // refined maximum; the minimal root sits on the ascending flank.
    std::size_t im = 0;
    for (std::size_t i = 1; i < g.g.size(); ++i)
        if (g.g[i] > g.g[im]) im = i;
    double lo = im > 0 ? g.s[im - 1] : g.s[im];
    if (h(lo) < 0.0 && h(g.arg_max) >= 0.0) {
        res.theta = bisect(h, lo, g.arg_max, 1e-10);
    } else {
        res.theta = g.arg_max;
    }
    return res;
}

// ---------------------------------------------------------------------------
// script-H
// ---------------------------------------------------------------------------

double PhiEvaluator::script_H(double r) const {
    if (!(r > 0)) throw ModelError("script_H: need r > 0");
    if (!model_->meta().flags.LMixed && !std::isfinite(phi_prime_at_zero()))
        throw ModelError(
            "script_H: model is not (L.Mixed)-like (phi'(0) diverges)");
    return cached(kScriptH, r, [&] {
        // sup over the truncated log grid of g(s) = s H(1/s); stop once the
        // running sup has not improved over two decades
        const int per_decade = 16;
        double sup_g = 0.0;
        int stale = 0;
        double s = r;
        const double step = std::pow(10.0, 1.0 / per_decade);
        for (int i = 0; i < 400 * per_decade; ++i) {
            double g = s * H(1.0 / s);
            if (g > sup_g * (1.0 + 1e-12)) {
                sup_g = std::max(sup_g, g);
                stale = 0;
            } else {
                ++stale;
            }
            if (stale >= 2 * per_decade) return 1.0 / sup_g;
            s *= step;
        }
        throw ModelError("script_H: infimum did not stabilize");
    });
}

double PhiEvaluator::script_H_inv(double u) const {
    if (!(u > 0)) throw ModelError("script_H_inv: need u > 0");
    double r;
    try {
        r = invert_monotone([this](double s) { return script_H(s); }, u,
                            true);
    } catch (const RootFailure&) {
        // u below the global floor of script-H: {r : scriptH(r) <= u} is
        // empty and the exponential summand it feeds degenerates to zero
        if (script_H(1e-6) > u) return 0.0;
        throw;
    }
    // sup{r : script_H(r) <= u}: push right through any flat stretch
    double hi = r;
    while (script_H(hi * 4.0) <= u) hi *= 4.0;
    if (hi == r) return r;
    return bisect([&](double s) { return script_H(s) - u; }, hi, hi * 4.0,
                  1e-10);
}

// ---------------------------------------------------------------------------
// complex phi
// ---------------------------------------------------------------------------

std::complex<double> PhiEvaluator::phi_cx(std::complex<double> z) const {
    const auto& m = *model_;
    if (m.has_laplace_cx()) return m.laplace_cx(z);
    const double sig = z.real(), v = std::fabs(z.imag());
    if (!(sig > 0)) throw ModelError("phi_cx: need Re z > 0");
    // real part: int (1 - e^{-sig s} cos(v s)) nu ds
    // imag part: int e^{-sig s} sin(v s) nu ds   (for v = |Im z|)
    const double sup = m.support_sup();
    double s_osc = v > 0 ? 3.141592653589793 / (2.0 * v) : kInf;
    double split = std::min({1.0 / sig, sup, s_osc});
    auto re_f = [&](double s) {
        return (1.0 - std::exp(-sig * s) * std::cos(v * s)) * m.density(s);
    };
    auto im_f = [&](double s) {
        return std::exp(-sig * s) * std::sin(v * s) * m.density(s);
    };
    double re = integrate_to_zero(re_f, split, quad_tol_).first;
    double im = integrate_to_zero(im_f, split, quad_tol_).first;
    double s_cut = std::min(sup, 42.0 / sig);
    if (s_cut > split) {
        // panels no wider than a half period keep the oscillation resolved
        double width = v > 0 ? std::max(s_osc, (s_cut - split) / 4096.0)
                             : (s_cut - split);
        double lo = split;
        while (lo < s_cut) {
            double hi = std::min(s_cut, lo + width);
            re += integrate_adaptive(re_f, lo, hi, quad_tol_, 0.0, 128).first;
            im += integrate_adaptive(im_f, lo, hi, quad_tol_, 0.0, 128).first;
            lo = hi;
            width *= 1.5;
        }
    }
    if (sup > s_cut) re += w(s_cut);
    double im_signed = z.imag() >= 0 ? im : -im;
    return {re, im_signed};
}

}  // namespace subcalc
