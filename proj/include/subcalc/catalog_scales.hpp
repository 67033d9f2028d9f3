#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "subcalc/log_real.hpp"

namespace subcalc {

// ---------------------------------------------------------------------------
// Oscillating construction: a_0=0, a_1=3, a_{n+1}=exp(a_n^{3/2}), with the
// piecewise scale psi alternating between r^{1/2}- and r^4-growth on the
// a_n-windows, and Phi(r) = r^2 / (2 int_0^r s/psi(s) ds).
//
// a_3 = exp(a_2^{3/2}) ~ e^{2427.8} overflows doubles, so everything is kept
// in LogReal.  a_4 overflows even the log representation; the sequence stops
// where representable.
// ---------------------------------------------------------------------------

enum class OscFn { Psi, Phi };

struct WindowEnvelope {
    int n;
    bool even;
    LogReal value;                  // the enveloping expression (min form)
    std::optional<LogReal> power_term;  // t/(y psi(y)) summand (even windows)
    std::optional<LogReal> exp_term;    // Gaussian-type summand (even windows)
};

class OscillatingSpec {
  public:
    OscillatingSpec();

    // a_0..a_max; a(k) with k beyond the representable range throws.
    LogReal a(int k) const;
    int max_index() const { return static_cast<int>(a_.size()) - 1; }

    // time windows: t_{2n} = a_{2n}^2/log a_{2n}, t_{2n+1} = a_{2n+1}^{1/2}
    LogReal t_window(int k) const;  // k >= 2

    LogReal psi(LogReal r) const;
    LogReal phi_scale(LogReal r) const;  // Phi(r)

    double psi_d(double r) const { return psi(LogReal::from_value(r)).value(); }

    // Envelope of Theorem-4.3 form for t inside a declared window
    // [t_k/2, t_k]; position is tb(t)+y.
    WindowEnvelope window_envelope(LogReal t, LogReal y, double c = 1.0) const;

    // Inverses of psi and Phi (both nondecreasing and unbounded).
    LogReal psi_inv(LogReal v) const;
    LogReal phi_scale_inv(LogReal v) const;

  private:
    struct Segment {
        LogReal lo, hi;   // (lo, hi]
        double expo;      // 4 or 1/2
        double coef;      // 1 or 4/3
        bool off_pos;     // sign of additive offset
        LogReal off_abs;  // |offset|; zero LogReal if none
        LogReal integ_lo; // int_0^{lo} s/psi ds
    };
    LogReal segment_psi(const Segment& s, LogReal r) const;
    LogReal integral_to(LogReal r) const;  // int_0^r s/psi ds
    std::vector<LogReal> a_;
    std::vector<Segment> segs_;
};

// ---------------------------------------------------------------------------
// Closed-form scale rows for the log-perturbed family
//   nu(s) = 1{0<s<=1} s^{-1-g1} log^p(1+1/s) + 1{s>1} s^{-1-g2} log^q(1+s).
// Each evaluator mirrors one display row; callers compare against the
// numeric Bernstein calculus up to a fitted constant band.
// ---------------------------------------------------------------------------

enum class LpScale {
    HAtInfinity,        // H(l) for l >= l0
    HInvAtInfinity,     // H^{-1}(l)
    PhiPrimeAtInfinity, // phi'(l)
    PhiPrimeInvAtInfinity,  // (phi')^{-1}(1/l)
    BSmallT,            // l^{-1} b(1/l) row, evaluated as t b(t) at t = 1/l
    HAtZero,            // H(l) for small l (case rows in gamma2/q)
    HInvAtZero,         // H^{-1}(l) for small l
    ScriptHInv,         // scripted-H inverse rows (s >= s0)
    PS                  // p_S(t,x,c): pass t via arg, x via arg2
};

struct LogPerturbedScales {
    double gamma1, p, gamma2, q;

    LogPerturbedScales(double g1, double p_, double g2, double q_);

    double eval(LpScale which, double arg, double arg2 = 0.0,
                double c = 1.0) const;
};

}  // namespace subcalc
