#include "subcalc/envelope.hpp"

#include <cmath>

namespace subcalc {

namespace {
const double k8e2 = 8.0 * std::exp(2.0);
}

std::string regime_name(RegimeTag tag) {
    switch (tag) {
        case RegimeTag::LeftTail: return "LeftTail";
        case RegimeTag::NearMode: return "NearMode";
        case RegimeTag::Mixed: return "Mixed";
        case RegimeTag::PureJump: return "PureJump";
    }
    return "?";
}

Regime Envelope::classify(double t, double x) const {
    if (!(t > 0) || !(x > 0)) throw ModelError("classify: need t, x > 0");
    Regime r;
    r.y = x - t * e_->b(t);
    if (r.y <= 0.0) {
        r.tag = RegimeTag::LeftTail;
    } else if (r.y < e_->spatial_scale(t)) {
        r.tag = RegimeTag::NearMode;
    } else if (r.y <= e_->D(t)) {
        r.tag = RegimeTag::Mixed;
    } else {
        r.tag = RegimeTag::PureJump;
    }
    return r;
}

EnvelopeResult Envelope::left_tail(double t, double x) const {
    Regime r = classify(t, x);
    if (r.tag != RegimeTag::LeftTail)
        throw ModelError("left_tail: x is beyond t b(t)");
    SaddleState st = e_->saddle(t, x);
    double v = std::exp(-t * st.H_sigma) / std::sqrt(t * st.neg_phi2);
    EnvelopeResult out;
    out.lower = out.upper = v;
    out.regime = r;
    return out;
}

double Envelope::left_tail_simple(double t, double x, double c) const {
    Regime r = classify(t, x);
    if (r.tag != RegimeTag::LeftTail)
        throw ModelError("left_tail_simple: x is beyond t b(t)");
    SaddleState st = e_->saddle(t, x);
    return e_->invert(PhiEvaluator::Fn::H, 1.0 / t) *
           std::exp(-c * t * st.H_sigma);
}

double Envelope::right_tail(double t, double y, double c) const {
    if (!(t > 0) || y < 0) throw ModelError("right_tail: need t > 0, y >= 0");
    const auto& flags = e_->model().meta().flags;
    const double R1 = e_->model().meta().R1;
    if (flags.S && !flags.L && !flags.S3star && y >= R1 / 2.0)
        throw ModelError("right_tail: y >= R1/2 requires (S-3*)");
    double hinv = e_->invert(PhiEvaluator::Fn::H, 1.0 / t);
    if (y == 0.0) return hinv;  // nu(0+) = infinity under (E)
    double nu_term = t * e_->model().density(y) / hinv;
    double th = e_->theta(t, y / k8e2).theta;
    double exp_term = std::exp(-c * y / th);
    return hinv * std::min(1.0, nu_term + exp_term);
}

double Envelope::pure_jump_min(double t, double x, double c) const {
    const auto& flags = e_->model().meta().flags;
    if (!flags.SPure && !flags.LPure)
        throw ModelError("pure_jump_min: model is neither (S.Pure) nor (L.Pure)");
    const double R1 = e_->model().meta().R1;
    if (flags.SPure && !flags.L && !flags.S3star && x >= R1 / 2.0)
        throw ModelError("pure_jump_min: x >= R1/2 requires (S-3*)");
    double hinv = e_->invert(PhiEvaluator::Fn::H, 1.0 / t);
    double p0 = e_->phi_prime_at_zero();
    double Hs = 0.0;  // sigma := 0 for x >= t phi'(0)
    if (!(std::isfinite(p0) && x >= t * p0)) Hs = e_->saddle(t, x).H_sigma;
    double first = hinv * std::exp(-c * t * Hs);
    double y = x - t * e_->b(t);
    if (y <= 0.0) return first;  // t nu(0+) = infinity
    return std::min(first, t * e_->model().density(y));
}

double Envelope::mixed_form(double t, double y, double c) const {
    if (!e_->model().meta().flags.LMixed)
        throw ModelError("mixed_form: model lacks (L.Mixed)");
    if (!(t > 0) || y < 0) throw ModelError("mixed_form: need t > 0, y >= 0");
    double hinv = e_->invert(PhiEvaluator::Fn::H, 1.0 / t);
    if (y == 0.0) return hinv;
    double nu_term = t * e_->model().density(y) / hinv;
    double exp_term = std::exp(-c * y / e_->script_H_inv(t / y));
    return hinv * std::min(1.0, nu_term + exp_term);
}

double Envelope::piecewise_value(double t, double x, double c_exp) const {
    Regime r = classify(t, x);
    if (r.tag == RegimeTag::LeftTail) return left_tail(t, x).lower;
    return right_tail(t, r.y, c_exp);
}

double Envelope::default_T1() const {
    return std::max(2.0 * e_->model().meta().T0, 2.0);
}

}  // namespace subcalc
