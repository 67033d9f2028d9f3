#include "subcalc/asymptotics.hpp"

#include <mpfr.h>

#include <cmath>

#include "subcalc/roots.hpp"
#include "subcalc/special.hpp"

namespace subcalc {

GeoAsymptotics GeoAsymptotics::make(double t, double x, double alpha, int k) {
    GeoAsymptotics g;
    g.alpha = alpha;
    g.zeta = std::pow(x / (alpha * t), alpha);
    g.eta1_d1 = 1.0;
    g.eta1_d2 = -2.0 * (1.0 - alpha);
    g.delta1 = 1.0;
    g.delta2 = alpha - 0.5;
    g.order = k;
    return g;
}

double limit_ratio(const PhiEvaluator& e, const ReferenceDensity& d, double t,
                   double x) {
    SaddleState st = e.saddle(t, x);
    double log_p;
    if (d.has_closed_form()) {
        log_p = d.log_closed_form(t, x);
    } else {
        DensityEstimate est = d.best(t, x);
        if (!(est.value > 0))
            throw ModelError("limit_ratio: reference density vanished");
        log_p = std::log(est.value);
    }
    return std::exp(log_p + t * st.H_sigma +
                    0.5 * std::log(t * st.neg_phi2));
}

double geo_sigma(double t, double x, double alpha) {
    const double rhs = alpha * t / x;
    if (!(rhs > 2.0))
        throw ModelError("geo_sigma: needs alpha t / x > 2 (sigma > 1)");
    // sigma + sigma^{1-alpha} increasing; root in (1, rhs)
    auto f = [&](double s) { return s + std::pow(s, 1.0 - alpha) - rhs; };
    return bisect(f, 1.0, rhs, 1e-13);
}

double geo_eta1(double lambda, double alpha) {
    if (!(lambda > 0) || !(lambda <= std::pow(2.0, -alpha) + 1e-15))
        throw ModelError("geo_eta1: need 0 < lambda <= 2^{-alpha}");
    double rhs = std::pow(lambda, -1.0 / alpha);
    auto f = [&](double s) { return s + std::pow(s, 1.0 - alpha) - rhs; };
    double sig = bisect(f, 1.0 - 1e-14, rhs, 1e-13);
    return 1.0 - std::pow(lambda, 1.0 / alpha) * sig;
}

double geo_eta2(double lambda, double alpha) {
    if (!(lambda > 0) || !(lambda <= std::pow(2.0, -alpha) + 1e-15))
        throw ModelError("geo_eta2: need 0 < lambda <= 2^{-alpha}");
    double rhs = std::pow(lambda, -1.0 / alpha);
    auto f = [&](double s) { return s + std::pow(s, 1.0 - alpha) - rhs; };
    double sig = bisect(f, 1.0 - 1e-14, rhs, 1e-13);
    return 1.0 + std::pow(sig, -alpha);
}

namespace {

// log of S = sum_{n>=0} (-1)^n Gamma(t+n) Gamma(at) x^{an} /
//                        (n! Gamma(t) Gamma(at+an))
// in multiprecision; the alternating cancellation grows like
// exp(c t) and overwhelms doubles for t beyond ~100.
double log_geo_sum_mpfr(double t, double x, double alpha) {
    // conservative precision estimate from the largest term magnitude
    double lx = std::log(x);
    double max_lt = 0.0;
    for (int n = 1; n < 4000; ++n) {
        double lt = log_gamma(t + n) - log_gamma(t) -
                    (log_gamma(alpha * t + alpha * n) - log_gamma(alpha * t)) +
                    alpha * n * lx - log_gamma(n + 1.0);
        if (lt > max_lt) max_lt = lt;
        if (lt < max_lt - 60.0) break;
    }
    double t_zeta = t * std::pow(x / (alpha * t), alpha);
    mpfr_prec_t prec =
        static_cast<mpfr_prec_t>(128 + 1.5 * (max_lt + t_zeta) * 1.4427);
    prec = std::min<mpfr_prec_t>(prec, 1 << 16);

    mpfr_t sum, term, tmp;
    mpfr_inits2(prec, sum, term, tmp, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_d(sum, 0.0, MPFR_RNDN);
    // term_0 = Gamma(at)/Gamma(at) = 1; ratio update
    //   term_{n+1}/term_n = -(t+n) x^alpha *
    //       Gamma(at+an)/Gamma(at+an+alpha) / (n+1)
    mpfr_set_d(term, 1.0, MPFR_RNDN);
    mpfr_add(sum, sum, term, MPFR_RNDN);
    const int max_n = 20000;
    for (int n = 0; n < max_n; ++n) {
        // multiply term by the exact ratio using lgamma in double would lose
        // precision; use mpfr lngamma for the Gamma ratio
        mpfr_set_d(tmp, alpha * t + alpha * n, MPFR_RNDN);
        mpfr_lngamma(tmp, tmp, MPFR_RNDN);
        mpfr_t tmp2;
        mpfr_init2(tmp2, prec);
        mpfr_set_d(tmp2, alpha * t + alpha * (n + 1.0), MPFR_RNDN);
        mpfr_lngamma(tmp2, tmp2, MPFR_RNDN);
        mpfr_sub(tmp, tmp, tmp2, MPFR_RNDN);  // ln Gamma ratio
        mpfr_exp(tmp, tmp, MPFR_RNDN);
        mpfr_mul(term, term, tmp, MPFR_RNDN);
        mpfr_clear(tmp2);
        mpfr_mul_d(term, term, -(t + n) * std::pow(x, alpha) / (n + 1.0),
                   MPFR_RNDN);
        mpfr_add(sum, sum, term, MPFR_RNDN);
        // stop when |term| is far below |sum|
        mpfr_abs(tmp, term, MPFR_RNDN);
        double lt = mpfr_get_d(tmp, MPFR_RNDN) == 0.0
                        ? -1e308
                        : mpfr_get_exp(tmp) * std::log(2.0);
        double ls = mpfr_get_exp(sum) * std::log(2.0);
        if (n > 8 && lt < ls - 80.0) break;
    }
    if (!(mpfr_sgn(sum) > 0)) {
        mpfr_clears(sum, term, tmp, static_cast<mpfr_ptr>(nullptr));
        throw ModelError("geo_asymp: series sum is not positive");
    }
    mpfr_log(sum, sum, MPFR_RNDN);
    double out = mpfr_get_d(sum, MPFR_RNDN);
    mpfr_clears(sum, term, tmp, static_cast<mpfr_ptr>(nullptr));
    return out;
}

}  // namespace

double geo_asymp(double t, double x, double alpha, int k) {
    if (!(alpha > 0) || alpha > 1.0) throw ModelError("geo_asymp: bad alpha");
    if (k == 1 && !(alpha > 0.5))
        throw ModelError("geo_asymp: k=1 needs alpha in (1/2, 1]");
    if (k == 2 && !(alpha > 1.0 / 3.0 && alpha <= 0.5))
        throw ModelError("geo_asymp: k=2 needs alpha in (1/3, 1/2]");
    if (k < 0 || k > 2) throw ModelError("geo_asymp: order must be 0..2");

    const double zeta = std::pow(x / (alpha * t), alpha);
    double log_corr;
    if (k == 0) {
        double sig = geo_sigma(t, x, alpha);
        log_corr = (1.0 - alpha) * t * std::log1p(std::pow(sig, -alpha)) +
                   alpha * t - sig * x;
    } else if (k == 1) {
        log_corr = t * zeta;
    } else {
        log_corr = t * zeta - 0.5 * (1.0 - alpha) * t * zeta * zeta;
    }
    double log_S = log_geo_sum_mpfr(t, x, alpha);
    // expression = S * exp(log_corr), with S the Gamma(at)-normalized sum
    return std::exp(log_S + log_corr);
}

}  // namespace subcalc
