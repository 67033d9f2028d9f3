#pragma once

#include "subcalc/phi_evaluator.hpp"
#include "subcalc/reference_density.hpp"

namespace subcalc {

// Constants of the geometric-stable expansion around zeta = (x/(alpha t))^alpha.
struct GeoAsymptotics {
    double alpha = 1.0;
    double zeta = 0.0;
    double eta1_d1 = 1.0;     // eta_1'(0)
    double eta1_d2 = 0.0;     // eta_1''(0) = -2(1-alpha)
    double delta1 = 1.0;
    double delta2 = 0.0;      // alpha - 1/2
    int order = 0;

    static GeoAsymptotics make(double t, double x, double alpha, int k);
};

// p_ref(t,x) * sqrt(t(-phi''(sigma))) * exp(t H(sigma)) -> (2 pi)^{-1/2}
double limit_ratio(const PhiEvaluator& e, const ReferenceDensity& d, double t,
                   double x);

// solves sigma + sigma^{1-alpha} = alpha t / x (needs alpha t / x > 2)
double geo_sigma(double t, double x, double alpha);

// eta_1, eta_2 of the expansion, for alpha lambda^{1/alpha} <= phi'(1)
double geo_eta1(double lambda, double alpha);
double geo_eta2(double lambda, double alpha);

// The normalized expression whose t->infinity limit is 1:
//  k=0: p(t,x) x^{1-at} Gamma(at) (1+sigma^{-a})^{(1-a)t} e^{at - sigma x}
//  k=1: p(t,x) x^{1-at} Gamma(at) exp(t zeta)            (alpha in (1/2,1])
//  k=2: p(t,x) x^{1-at} Gamma(at) exp(t zeta - (1-a)/2 t zeta^2)
//                                                        (alpha in (1/3,1/2])
// p(t,x) comes from the series; the alternating sum runs in multiprecision
// because its cancellation exceeds double range for large t.
double geo_asymp(double t, double x, double alpha, int k);

}  // namespace subcalc
