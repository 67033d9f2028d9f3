#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subcalc/phi_evaluator.hpp"

namespace subcalc {

enum class DensityMethod { Fourier, Saddle, ClosedForm, Series, MonteCarlo };

std::string method_name(DensityMethod m);

struct DensityEstimate {
    double value = 0.0;
    DensityMethod method = DensityMethod::Fourier;
    double err = 0.0;  // estimated absolute error
};

// Transition density p(t, x) by routes independent of the envelope module.
class ReferenceDensity {
  public:
    explicit ReferenceDensity(const PhiEvaluator& eval) : e_(&eval) {}

    // cosine-form Fourier inversion; needs t > T0
    DensityEstimate fourier(double t, double x) const;

    // Fourier-Mellin inversion through the saddle; also reports the raw
    // integral int e^{-tM} du (-> sqrt(2 pi) deep in the left regime)
    DensityEstimate saddle(double t, double x,
                           double* raw_integral = nullptr) const;

    bool has_closed_form() const;
    DensityEstimate closed_form(double t, double x) const;
    double log_closed_form(double t, double x) const;

    // closed form when available, then saddle, then Fourier
    DensityEstimate best(double t, double x) const;

    // compound-Poisson sampling above the cutoff eps with mean compensation
    std::vector<double> sample_paths(double t, std::size_t n, double eps,
                                     std::uint64_t seed) const;

    static DensityEstimate empirical_density(const std::vector<double>& samples,
                                             double x, double bandwidth);

  private:
    std::pair<double, double> symbol(double xi) const;  // (A, B) of phi(-i xi)
    double truncation_xi(double t) const;
    const PhiEvaluator* e_;
};

// Geometric stable transition density via the alternating series; throws on
// the cancellation guard.  Returns log p(t,x).
double geo_log_density_series(double t, double x, double alpha,
                              double guard = 1e8);

}  // namespace subcalc
