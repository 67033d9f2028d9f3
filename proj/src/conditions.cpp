#include "subcalc/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace subcalc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// residual threshold in ratio: the conditions are asymptotic, so "holds"
// means a constant fit exists over the finite window with spread below this
constexpr double kRatioResidual = 10.0;
}  // namespace

double ConditionVerifier::check_E() const {
    // liminf of x nu(x), estimated as the infimum over the smallest decades
    // of a log grid on [1e-10, 1e-2]
    const int per_decade = 25;
    double lim = kInf;
    for (int i = 0; i <= 4 * per_decade; ++i) {
        double x = 1e-10 * std::pow(10.0, static_cast<double>(i) / per_decade);
        lim = std::min(lim, x * m_->density(x));
    }
    if (lim > 1e12) return 0.0;  // 1/infinity convention
    return 1.0 / lim;
}

ScalingFit ConditionVerifier::fit_scaling(double r_min, double r_max) const {
    if (!(r_min > 0) || !(r_max / r_min >= 10.0))
        throw ModelError("fit_scaling: window must span at least one decade");
    const int n = std::max<int>(
        33, static_cast<int>(32 * std::log10(r_max / r_min)) + 1);
    std::vector<double> lr(n), lv(n);
    for (int i = 0; i < n; ++i) {
        lr[i] = std::log(r_min) +
                (std::log(r_max) - std::log(r_min)) * i / (n - 1);
        double nu = m_->density(std::exp(lr[i]));
        if (!(nu > 0))
            throw ModelError("fit_scaling: density vanishes inside window");
        lv[i] = std::log(nu);
    }
    ScalingFit fit;
    fit.r_min = r_min;
    fit.r_max = r_max;
    double dmin = kInf, dmax = -kInf;
    for (int i = 0; i + 1 < n; ++i) {
        double slope = (lv[i + 1] - lv[i]) / (lr[i + 1] - lr[i]);
        dmin = std::min(dmin, -slope);
        dmax = std::max(dmax, -slope);
    }
    fit.alpha_low = dmin - 1.0;
    fit.alpha_high = dmax - 1.0;
    // least squares line
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += lr[i];
        sy += lv[i];
        sxx += lr[i] * lr[i];
        sxy += lr[i] * lv[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double icpt = (sy - slope * sx) / n;
    fit.alpha_ls = -slope - 1.0;
    for (int i = 0; i < n; ++i)
        fit.residual =
            std::max(fit.residual, std::fabs(lv[i] - (icpt + slope * lr[i])));
    return fit;
}

CapsResult ConditionVerifier::check_caps() const {
    CapsResult out;
    const auto& meta = m_->meta();
    const double sup = m_->support_sup();

    // (S-3): sup_{r >= R1} nu(r) <= c3, sup over empty set = 0
    {
        double R1 = std::isfinite(meta.R1) ? meta.R1 : 1.0;
        bool finite_sup = true;
        double cap = 0.0, prev = kInf;
        bool increasing_at_edge = false;
        for (int i = 0; i <= 128; ++i) {
            double r = R1 * std::pow(1e4, i / 128.0);
            if (r >= sup) break;
            double nu = m_->density(r);
            cap = std::max(cap, nu);
            increasing_at_edge = i > 100 && nu > prev * (1.0 + 1e-9);
            prev = nu;
        }
        if (std::isinf(meta.R1)) {
            // (S) with R1 = infinity: the sup runs over the empty set
            cap = 0.0;
        }
        out.s3 = finite_sup && !increasing_at_edge;
        out.c3 = cap;
    }

    // (S-3*) on the window [half, 2 * (2 half)] with half = R1/2 (or 1/2)
    {
        double half = std::isfinite(meta.R1) ? meta.R1 / 2.0 : 0.5;
        double c4min = kInf, c4max = 0.0, c5min = kInf, c5max = 0.0;
        bool ok = true;
        for (int i = 0; i <= 64; ++i) {
            double r = half * std::pow(4.0, i / 64.0);
            if (2.0 * r >= sup) {
                ok = false;  // doubling leaves the support
                break;
            }
            double nur = m_->density(r);
            // sup_{u >= r} nu(u) over an extended grid with decreasing tail
            double supu = 0.0;
            for (int j = 0; j <= 96; ++j)
                supu = std::max(
                    supu, m_->density(std::min(r * std::pow(100.0, j / 96.0),
                                               sup * (1 - 1e-12))));
            double c4 = nur > 0 && supu > 0 ? nur / supu : 0.0;
            double nu2r = m_->density(2.0 * r);
            double c5 = nur > 0 ? nu2r / nur : 0.0;
            if (!(c4 > 0) || !(c5 > 0)) {
                ok = false;
                break;
            }
            c4min = std::min(c4min, c4);
            c4max = std::max(c4max, c4);
            c5min = std::min(c5min, c5);
            c5max = std::max(c5max, c5);
        }
        ok = ok && c4max / c4min < kRatioResidual &&
             c5max / c5min < kRatioResidual;
        out.s3star = ok;
        out.c4 = ok ? c4min : 0.0;
        out.c5 = ok ? c5min : 0.0;
    }

    // (L-3): nu(r)/nu(R) >= c8 (R/r)^{-c9} near zero; any finite fit passes
    {
        double R3 = std::min(meta.R3, sup / 2);
        double worst = 0.0;  // max growth exponent of nu toward larger r
        bool ok = true;
        for (int i = 0; i + 1 <= 64; ++i) {
            double r = R3 * 1e-6 * std::pow(1e6, i / 64.0);
            double R = std::min(R3, 4.0 * r);
            double nur = m_->density(r), nuR = m_->density(R);
            if (!(nur > 0) || !(nuR > 0)) {
                ok = false;
                break;
            }
            // need nu(r)/nu(R) >= c8 (r/R)^{c9}: exponent of growth in R
            double g = std::log(nuR / nur) / std::log(R / r);
            worst = std::max(worst, g);
        }
        out.l3 = ok && std::isfinite(worst);
        out.c9 = std::max(0.0, worst);
    }
    return out;
}

ConditionReport ConditionVerifier::classify() const {
    ConditionReport rep;
    rep.T0_est = check_E();
    const auto& meta = m_->meta();
    rep.T0_matches_meta =
        std::fabs(rep.T0_est - meta.T0) <= 0.05 * std::max(1.0, meta.T0);

    const double sup = m_->support_sup();
    double small_hi = std::min({1.0, std::isfinite(meta.R1) ? meta.R1 : 1.0,
                                sup / 2}) *
                      0.5;
    rep.small_fit = fit_scaling(1e-6, small_hi);
    rep.caps = check_caps();

    auto& f = rep.flags;
    f.E = true;
    f.S1 = rep.small_fit.alpha_low > 0.01;
    f.S2 = rep.small_fit.residual < std::log(kRatioResidual) &&
           rep.small_fit.alpha_high < 20.0;
    f.S3 = rep.caps.s3;
    f.S3star = rep.caps.s3star;
    f.S = f.S1 && f.S2 && f.S3;
    f.G = f.S && std::isinf(meta.R1);
    f.SPure = f.S && rep.small_fit.alpha_high + 1e-9 < 2.0;

    if (std::isfinite(sup)) {
        // truncated support: no large-r scaling regime
        f.L1 = f.L2 = f.L = f.LPure = f.LMixed = false;
        rep.large_fit = ScalingFit{};
    } else {
        double lo = std::max(meta.R2, 1.0) * 2.0;
        rep.large_fit = fit_scaling(lo, lo * 1e3);
        f.L1 = rep.large_fit.alpha_low > 0.01;
        f.L2 = rep.large_fit.residual < std::log(kRatioResidual) &&
               rep.large_fit.alpha_high < 1e3;
        f.L3 = rep.caps.l3;
        f.L = f.L1 && f.L2 && f.L3;
        f.LPure = f.L && rep.large_fit.alpha_high + 1e-9 < 2.0;
        f.LMixed = f.L && rep.large_fit.alpha_low > 1.0;
    }
    f.L3 = rep.caps.l3;
    return rep;
}

std::string ConditionReport::to_json() const {
    std::ostringstream os;
    os.precision(10);
    auto b = [](bool v) { return v ? "true" : "false"; };
    os << "{\n";
    os << "  \"T0_est\": " << T0_est << ",\n";
    os << "  \"T0_matches_meta\": " << b(T0_matches_meta) << ",\n";
    os << "  \"small_fit\": {\"alpha_low\": " << small_fit.alpha_low
       << ", \"alpha_high\": " << small_fit.alpha_high
       << ", \"alpha_ls\": " << small_fit.alpha_ls
       << ", \"residual\": " << small_fit.residual << "},\n";
    os << "  \"large_fit\": {\"alpha_low\": " << large_fit.alpha_low
       << ", \"alpha_high\": " << large_fit.alpha_high
       << ", \"alpha_ls\": " << large_fit.alpha_ls
       << ", \"residual\": " << large_fit.residual << "},\n";
    os << "  \"caps\": {\"c3\": " << caps.c3 << ", \"c4\": " << caps.c4
       << ", \"c5\": " << caps.c5 << ", \"c9\": " << caps.c9 << "},\n";
    os << "  \"flags\": {"
       << "\"E\": " << b(flags.E) << ", \"S1\": " << b(flags.S1)
       << ", \"S2\": " << b(flags.S2) << ", \"S3\": " << b(flags.S3)
       << ", \"S3star\": " << b(flags.S3star) << ", \"L1\": " << b(flags.L1)
       << ", \"L2\": " << b(flags.L2) << ", \"L3\": " << b(flags.L3)
       << ", \"S\": " << b(flags.S) << ", \"L\": " << b(flags.L)
       << ", \"G\": " << b(flags.G) << ", \"SPure\": " << b(flags.SPure)
       << ", \"LPure\": " << b(flags.LPure)
       << ", \"LMixed\": " << b(flags.LMixed) << "}\n";
    os << "}\n";
    return os.str();
}

}  // namespace subcalc
