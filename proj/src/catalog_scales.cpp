#include "subcalc/catalog_scales.hpp"

#include <cmath>
#include <limits>

#include "subcalc/roots.hpp"

namespace subcalc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// antiderivative of s / (s^4 + A)
double quartic_antideriv(double s, double A) {
    if (A > 0) {
        const double m = std::sqrt(A);
        return 0.5 / m * std::atan(s * s / m);
    }
    if (A < 0) {
        const double m = std::sqrt(-A);
        return 0.25 / m * std::log((s * s - m) / (s * s + m));
    }
    return -0.5 / (s * s);
}

// antiderivative of s / ((4/3) sqrt(s) + B), via u = sqrt(s)
double sqrt_branch_antideriv(double s, double B) {
    const double a = 4.0 / 3.0;
    const double u = std::sqrt(s);
    if (B == 0.0) return 0.5 * u * u * u;  // s^{3/2}/2
    return 2.0 * (u * u * u / (3 * a) - B * u * u / (2 * a * a) +
                  B * B * u / (a * a * a) -
                  B * B * B / (a * a * a * a) * std::log(a * u + B));
}

}  // namespace

OscillatingSpec::OscillatingSpec() {
    a_.push_back(LogReal::from_value(0.0));
    a_.push_back(LogReal::from_value(3.0));
    double lg = std::pow(3.0, 1.5);  // log a_2
    a_.push_back(LogReal::from_log(lg));
    a_.push_back(LogReal::from_log(std::exp(1.5 * lg)));  // log a_3 = a_2^{3/2}
    // a_4 = exp(a_3^{3/2}) is not log-representable; stop here.

    // Segments of psi. Offsets keep psi continuous across windows.
    const LogReal inf = LogReal::from_log(kInf);
    // (0, a_1]: (4/3) r^{1/2}
    Segment s1{a_[0], a_[1], 0.5, 4.0 / 3.0, true, LogReal(), LogReal()};
    segs_.push_back(s1);
    // (a_1, a_2]: r^4 + off, off = psi(a_1) - a_1^4 < 0
    double psi_a1 = 4.0 / 3.0 * std::sqrt(3.0);
    double off1 = psi_a1 - 81.0;
    segs_.push_back({a_[1], a_[2], 4.0, 1.0, off1 > 0,
                     LogReal::from_value(std::fabs(off1)), LogReal()});
    // (a_2, a_3]: (4/3) r^{1/2} + off2
    double a2 = a_[2].value();
    double psi_a2 = std::pow(a2, 4.0) + off1;
    double off2 = psi_a2 - 4.0 / 3.0 * std::sqrt(a2);
    segs_.push_back({a_[2], a_[3], 0.5, 4.0 / 3.0, off2 > 0,
                     LogReal::from_value(std::fabs(off2)), LogReal()});
    // (a_3, inf): r^4 + off3, off3 = psi(a_3) - a_3^4 (negative, astronomically)
    LogReal psi_a3 = segment_psi(segs_[2], a_[3]);
    LogReal off3_abs = a_[3].pow(4.0) - psi_a3;
    segs_.push_back({a_[3], inf, 4.0, 1.0, false, off3_abs, LogReal()});

    // cumulative integrals int_0^{seg.lo} s/psi ds
    segs_[0].integ_lo = LogReal::from_value(0.0);
    // I(a_1) = a_1^{3/2}/2
    LogReal I1 = LogReal::from_value(0.5 * std::pow(3.0, 1.5));
    segs_[1].integ_lo = I1;
    double seg2 = quartic_antideriv(a2, off1) - quartic_antideriv(3.0, off1);
    LogReal I2 = I1 + LogReal::from_value(seg2);
    segs_[2].integ_lo = I2;
    // segment 3 spans far beyond doubles; split at 1e100
    const double rs = 1e100;
    double seg3_head = sqrt_branch_antideriv(rs, off2) - sqrt_branch_antideriv(a2, off2);
    LogReal I_rs = I2 + LogReal::from_value(seg3_head);
    // pure-power remainder: (1/2)(a_3^{3/2} - rs^{3/2}); offset is negligible there
    LogReal I3 = I_rs + LogReal::from_log(std::log(0.5)) *
                            (a_[3].pow(1.5) - LogReal::from_value(rs).pow(1.5));
    segs_[3].integ_lo = I3;
}

LogReal OscillatingSpec::a(int k) const {
    if (k < 0 || k >= static_cast<int>(a_.size()))
        throw std::domain_error("OscillatingSpec: a_n not representable");
    return a_[k];
}

LogReal OscillatingSpec::t_window(int k) const {
    if (k < 2 || k >= static_cast<int>(a_.size()))
        throw std::domain_error("OscillatingSpec: window not representable");
    if (k % 2 == 0) {
        // t_{2n} = a_{2n}^2 / log a_{2n}
        return a_[k].pow(2.0) / LogReal::from_value(a_[k].log());
    }
    return a_[k].pow(0.5);
}

LogReal OscillatingSpec::segment_psi(const Segment& s, LogReal r) const {
    LogReal power = LogReal::from_value(s.coef) * r.pow(s.expo);
    if (s.off_abs.is_zero()) return power;
    return s.off_pos ? power + s.off_abs : power - s.off_abs;
}

LogReal OscillatingSpec::psi(LogReal r) const {
    if (r.is_zero() || r.log() == kInf)
        throw std::domain_error("OscillatingSpec::psi: r out of range");
    for (const auto& s : segs_)
        if (r > s.lo && r <= s.hi) return segment_psi(s, r);
    // r <= a_0 impossible (a_0 = 0); r in (0, a_1] caught above
    return segment_psi(segs_.front(), r);
}

LogReal OscillatingSpec::integral_to(LogReal r) const {
    for (std::size_t i = 0; i < segs_.size(); ++i) {
        const auto& s = segs_[i];
        if (!(r > s.lo && r <= s.hi)) continue;
        switch (i) {
            case 0:
                return LogReal::from_log(std::log(0.5)) * r.pow(1.5);
            case 1: {
                double off1 = (s.off_pos ? 1 : -1) * s.off_abs.value();
                double part = quartic_antideriv(r.value(), off1) -
                              quartic_antideriv(3.0, off1);
                return s.integ_lo + LogReal::from_value(part);
            }
            case 2: {
                double B = s.off_abs.value();
                if (r.log() < std::log(1e100)) {
                    double part = sqrt_branch_antideriv(r.value(), B) -
                                  sqrt_branch_antideriv(segs_[2].lo.value(), B);
                    return s.integ_lo + LogReal::from_value(part);
                }
                const double rs = 1e100;
                double head = sqrt_branch_antideriv(rs, B) -
                              sqrt_branch_antideriv(segs_[2].lo.value(), B);
                return s.integ_lo + LogReal::from_value(head) +
                       LogReal::from_log(std::log(0.5)) *
                           (r.pow(1.5) - LogReal::from_value(rs).pow(1.5));
            }
            default:
                // beyond a_3 the added mass is ~a_3^{-2}; below representable
                // relative precision of the cumulative integral
                return s.integ_lo;
        }
    }
    return LogReal::from_value(0.0);
}

LogReal OscillatingSpec::phi_scale(LogReal r) const {
    LogReal I = integral_to(r);
    return r.pow(2.0) / (LogReal::from_value(2.0) * I);
}

WindowEnvelope OscillatingSpec::window_envelope(LogReal t, LogReal y,
                                                double c) const {
    const LogReal half = LogReal::from_value(0.5);
    for (int k = 2; k < static_cast<int>(a_.size()); ++k) {
        LogReal tk = t_window(k);
        if (!(t >= half * tk && t <= tk)) continue;
        WindowEnvelope out;
        out.n = k / 2;
        out.even = (k % 2 == 0);
        LogReal power = y.is_zero()
                            ? LogReal::from_log(kInf)
                            : t / (y * psi(y));
        if (!out.even) {
            out.value = min(t.pow(-2.0), power);
            return out;
        }
        double lt = t.log();
        LogReal cap = t.pow(-0.5) / LogReal::from_value(std::sqrt(lt));
        double expo_log = 2.0 * y.log() - lt - std::log(lt);
        LogReal expterm;
        if (y.is_zero()) {
            expterm = cap;
        } else if (expo_log > std::log(1e300)) {
            expterm = LogReal::from_value(0.0);
        } else {
            expterm = cap * LogReal::from_log(-c * std::exp(expo_log));
        }
        out.power_term = power;
        out.exp_term = expterm;
        out.value = min(cap, power + expterm);
        return out;
    }
    throw std::domain_error("OscillatingSpec: t outside every representable window");
}

LogReal OscillatingSpec::psi_inv(LogReal v) const {
    double target = v.log();
    auto f = [this](double lr) { return psi(LogReal::from_log(lr)).log(); };
    double lo = -700.0, hi = a_[3].log() + 100.0;
    if (f(lo) > target) throw std::domain_error("psi_inv: value too small");
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (f(mid) < target ? lo : hi) = mid;
    }
    return LogReal::from_log(0.5 * (lo + hi));
}

LogReal OscillatingSpec::phi_scale_inv(LogReal v) const {
    double target = v.log();
    auto f = [this](double lr) { return phi_scale(LogReal::from_log(lr)).log(); };
    double lo = -700.0, hi = a_[3].log() + 100.0;
    if (f(lo) > target) throw std::domain_error("phi_scale_inv: value too small");
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (f(mid) < target ? lo : hi) = mid;
    }
    return LogReal::from_log(0.5 * (lo + hi));
}

// ---------------------------------------------------------------------------

LogPerturbedScales::LogPerturbedScales(double g1, double p_, double g2,
                                       double q_)
    : gamma1(g1), p(p_), gamma2(g2), q(q_) {
    if (g1 < 0 || g1 > 1 || g2 <= 1)
        throw std::domain_error("LogPerturbedScales: parameters out of range");
    if (g1 == 0 && p <= 0)
        throw std::domain_error("LogPerturbedScales: gamma1=0 needs p>0");
    if (g1 == 1 && p >= -1)
        throw std::domain_error("LogPerturbedScales: gamma1=1 needs p<-1");
}

double LogPerturbedScales::eval(LpScale which, double arg, double arg2,
                                double c) const {
    const double l = arg;
    auto lg = [](double x) { return std::log1p(x); };
    switch (which) {
        case LpScale::HAtInfinity:
            if (gamma1 == 0) return std::pow(lg(l), p + 1);
            return std::pow(l, gamma1) * std::pow(lg(l), p);
        case LpScale::HInvAtInfinity:
            if (gamma1 == 0)
                throw std::domain_error("HInvAtInfinity: needs gamma1>0");
            return std::pow(l, 1.0 / gamma1) * std::pow(lg(l), -p / gamma1);
        case LpScale::PhiPrimeAtInfinity:
            if (gamma1 == 0) return std::pow(lg(l), p) / l;
            if (gamma1 == 1) return std::pow(lg(l), p + 1);
            return std::pow(l, gamma1 - 1.0) * std::pow(lg(l), p);
        case LpScale::PhiPrimeInvAtInfinity:
            if (gamma1 == 0) return l * std::pow(lg(l), p);
            if (gamma1 == 1) return std::exp(c * std::pow(l, -1.0 / (p + 1)));
            return std::pow(l, 1.0 / (1.0 - gamma1)) *
                   std::pow(lg(l), p / (1.0 - gamma1));
        case LpScale::BSmallT: {
            // t b(t) at t = arg
            const double t = arg;
            if (gamma1 == 0)
                throw std::domain_error("BSmallT: needs gamma1>0");
            if (gamma1 == 1) return t * std::pow(lg(1.0 / t), p + 1);
            return std::pow(t, 1.0 / gamma1) *
                   std::pow(lg(1.0 / t), p / gamma1);
        }
        case LpScale::HAtZero:
            if (gamma2 < 2) return std::pow(l, gamma2) * std::pow(lg(1.0 / l), q);
            if (gamma2 == 2 && q > -1)
                return l * l * std::pow(lg(1.0 / l), q + 1);
            if (gamma2 == 2 && q == -1)
                return l * l * std::log(lg(1.0 / l));
            return l * l;
        case LpScale::HInvAtZero:
            if (gamma2 < 2)
                return std::pow(l, 1.0 / gamma2) *
                       std::pow(lg(1.0 / l), -q / gamma2);
            if (gamma2 == 2 && q > -1)
                return std::sqrt(l) * std::pow(lg(1.0 / l), -(q + 1) / 2.0);
            if (gamma2 == 2 && q == -1)
                return std::sqrt(l) / std::log(lg(1.0 / l));
            return std::sqrt(l);
        case LpScale::ScriptHInv: {
            const double s = arg;
            if (gamma2 == 2 && q > -1) return s * std::pow(lg(s), q + 1);
            if (gamma2 == 2 && q == -1) return s * std::log(lg(s));
            if (gamma2 > 2 || (gamma2 == 2 && q < -1)) return s;
            throw std::domain_error("ScriptHInv: no case row for gamma2<2");
        }
        case LpScale::PS: {
            const double t = arg, x = arg2;
            if (gamma1 == 0)
                return std::pow(t, -(2 * p + 1) / (2 * p + 2)) *
                       std::exp(-c * t * std::pow(lg(t / x), p + 1));
            if (gamma1 == 1)
                return std::pow(lg(1.0 / t), -p) / t *
                       std::exp(-c * t *
                                std::exp(std::pow(t / x, -1.0 / (p + 1))));
            return std::pow(t, -1.0 / gamma1) *
                   std::pow(lg(1.0 / t), -p / gamma1) *
                   std::exp(-c * t * std::pow(t / x, gamma1 / (1.0 - gamma1)) *
                            std::pow(lg(t / x), p / (1.0 - gamma1)));
        }
    }
    throw std::domain_error("LogPerturbedScales: unknown row");
}

}  // namespace subcalc
