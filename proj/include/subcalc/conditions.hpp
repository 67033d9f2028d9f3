#pragma once

#include <optional>
#include <string>

#include "subcalc/levy_model.hpp"

namespace subcalc {

struct ScalingFit {
    double alpha_low = 0.0;   // min local decay exponent minus 1
    double alpha_high = 0.0;  // max local decay exponent minus 1
    double alpha_ls = 0.0;    // least-squares exponent minus 1
    double r_min = 0.0, r_max = 0.0;
    double residual = 0.0;  // max log-ratio deviation from the LS line
};

struct CapsResult {
    bool s3 = false, s3star = false, l3 = false;
    double c3 = 0.0;          // fitted sup bound for (S-3)
    double c4 = 0.0, c5 = 0.0;  // fitted (S-3*) constants
    double c9 = 0.0;          // fitted (L-3) exponent
};

struct ConditionReport {
    double T0_est = 0.0;
    bool T0_matches_meta = true;
    ScalingFit small_fit, large_fit;
    CapsResult caps;
    ConditionFlags flags;
    std::string to_json() const;
};

class ConditionVerifier {
  public:
    explicit ConditionVerifier(const LevyModel& m) : m_(&m) {}

    // condition (E): liminf_{x->0} x nu(x) = 1/T0, estimated on a log grid
    double check_E() const;

    // local log-log slopes of nu over [r_min, r_max]
    ScalingFit fit_scaling(double r_min, double r_max) const;

    CapsResult check_caps() const;

    ConditionReport classify() const;

  private:
    const LevyModel* m_;
};

}  // namespace subcalc
