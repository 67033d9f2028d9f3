#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "subcalc/levy_model.hpp"

namespace subcalc {

// Saddle bundle at (t, x): sigma = (phi')^{-1}(x/t) together with the
// quantities every envelope and the Fourier-Mellin integrand need.
struct SaddleState {
    double t = 0, x = 0;
    double sigma = 0;
    double H_sigma = 0;
    double neg_phi2 = 0;   // -phi''(sigma)
    double script_T = 0;   // sigma * sqrt(t * (-phi''(sigma)))
    double script_T0 = 0;  // (sigma0 v sigma) * sqrt(t * (-phi''(sigma)))
};

enum class ThetaBranch { BelowMode, Root, BeyondD };

struct ThetaResult {
    double t = 0, y = 0;
    double theta = 0;
    ThetaBranch branch = ThetaBranch::BelowMode;
};

// Quadrature-backed evaluation of phi and its derivatives, H, w, their
// monotone inverses and the derived scales b, sigma, D, theta, script-H.
// Evaluations are pure given the model; the memo cache takes a lock on
// insertion so an evaluator may be shared across readers.
class PhiEvaluator {
  public:
    explicit PhiEvaluator(LevyModel model, double quad_tol = 1e-10);

    const LevyModel& model() const { return *model_; }
    double quad_tol() const { return quad_tol_; }
    void set_sigma0(double s0) { sigma0_ = s0; }

    // phi and signed derivatives, n = 0..3
    double phi(double lambda) const { return phi_deriv(lambda, 0); }
    double phi_deriv(double lambda, int n) const;
    double H(double lambda) const;
    double w(double r) const;
    double phi_prime_at_zero() const;  // may be +infinity

    enum class Fn { H, Phi, PhiPrime, W };
    double invert(Fn which, double v) const;

    double b(double t) const;          // phi'(H^{-1}(1/t))
    double spatial_scale(double t) const;  // H^{-1}(1/t)^{-1}
    SaddleState saddle(double t, double x) const;
    double D(double t) const;
    ThetaResult theta(double t, double y) const;

    // script-H of Corollary-1.7 type: inf_{s>=r} 1/(s H(1/s)) and its
    // generalized inverse.  Requires the infimum to stabilize (finite
    // phi'(0)); throws otherwise.
    double script_H(double r) const;
    double script_H_inv(double u) const;

    // phi continued to the right half plane (closed form or quadrature)
    std::complex<double> phi_cx(std::complex<double> z) const;

  private:
    double phi_quad(double lambda) const;
    double deriv_quad(double lambda, int n) const;
    double H_quad(double lambda) const;
    template <class F>
    double cached(int kind, double arg, F&& compute) const;
    struct ThetaGrid {
        double lo = 0, hi = 0, D = 0, arg_max = 0;
        std::vector<double> s, g;  // g = t s H(1/s)
    };
    const ThetaGrid& theta_grid(double t) const;

    std::shared_ptr<const LevyModel> model_;
    double quad_tol_;
    double sigma0_ = 1.0;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, double>, double> cache_;
    mutable std::map<double, ThetaGrid> theta_cache_;
    mutable double phi_prime0_ = -1.0;  // lazy; -1 = unset
};

}  // namespace subcalc
