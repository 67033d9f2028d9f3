#pragma once

#include <string>

#include "subcalc/phi_evaluator.hpp"

namespace subcalc {

enum class RegimeTag { LeftTail = 0, NearMode = 1, Mixed = 2, PureJump = 3 };

std::string regime_name(RegimeTag tag);

struct Regime {
    RegimeTag tag = RegimeTag::LeftTail;
    double y = 0.0;  // x - t b(t), signed offset from the mode location
};

// Comparison constants carried alongside envelope values.  The two-sided
// estimates only assert existence of these, so values default to 1 and the
// certification step fits them per model.
struct ConstantSet {
    double c1 = 1.0, c2 = 1.0, c3 = 1.0, c4 = 1.0, c5 = 1.0;
    double c_exp = 1.0;  // rate inside the exponential summand
    double T1 = 0.0;     // large-time threshold actually used
    double M0 = 1.0;
};

struct EnvelopeResult {
    double lower = 0.0;
    double upper = 0.0;
    Regime regime;
    ConstantSet constants;
};

class Envelope {
  public:
    explicit Envelope(const PhiEvaluator& eval) : e_(&eval) {}

    Regime classify(double t, double x) const;

    // exp(-t H(sigma)) / sqrt(t (-phi''(sigma))) on 0 < x <= t b(t)
    EnvelopeResult left_tail(double t, double x) const;

    // H^{-1}(1/t) exp(-c t H(sigma)); c = 2 lower / 1/2 upper
    double left_tail_simple(double t, double x, double c) const;

    // H^{-1}(1/t) min{1, t nu(y)/H^{-1}(1/t) + exp(-c y / theta(t, y/(8e^2)))}
    double right_tail(double t, double y, double c) const;

    // min{H^{-1}(1/t) e^{-c t H(sigma)}, t nu((x - t b(t))_+)}; sigma := 0
    // for x >= t phi'(0)
    double pure_jump_min(double t, double x, double c = 1.0) const;

    // H^{-1}(1/t) min{1, t nu(y)/H^{-1}(1/t) + exp(-c y / scriptH^{-1}(t/y))}
    double mixed_form(double t, double y, double c) const;

    // regime-dispatched value used for sandwich certification
    double piecewise_value(double t, double x, double c_exp) const;

    // large-time threshold for (L)-type models: max(2 T0, 2)
    double default_T1() const;

  private:
    const PhiEvaluator* e_;
};

}  // namespace subcalc
