#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace subcalc {

struct ModelError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Family {
    Stable,
    TruncatedStable,
    Gamma,
    GeometricStable,
    StableMixture,
    LogPerturbed,
    Oscillating,
    Custom
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct ConditionFlags {
    bool E = false;
    bool S1 = false, S2 = false, S3 = false, S3star = false;
    bool L1 = false, L2 = false, L3 = false;
    bool S = false, L = false, G = false;
    bool SPure = false, LPure = false, LMixed = false;

    bool operator==(const ConditionFlags&) const = default;
};

struct ModelMeta {
    double T0 = 0.0;  // condition (E) constant; may be 0
    double R1 = std::numeric_limits<double>::infinity();
    double R2 = 1.0;
    double R3 = 1.0;
    std::optional<double> alpha1, alpha2, alpha3, alpha4;
    ConditionFlags flags;
};

struct ModelSpec {
    std::string family;           // e.g. "stable", "gamma", "log_perturbed"
    std::map<std::string, double> params;
    std::vector<std::pair<double, double>> grid;  // knots for custom models

    std::string to_string() const;                  // model-spec text document
    static ModelSpec parse(const std::string& text);
    static ModelSpec inline_spec(const std::string& s);  // "family:k=v,k=v"
};

// Immutable description of a driftless subordinator through its Levy density.
class LevyModel {
  public:
    using Density = std::function<double(double)>;
    using Scalar = std::function<double(double)>;
    using ComplexFn = std::function<std::complex<double>(std::complex<double>)>;

    double density(double s) const;  // nu(s); s > 0
    double tail(double r) const;     // w(r) = nu(r, inf); r > 0
    bool has_closed_tail() const { return static_cast<bool>(tail_); }

    bool has_laplace() const { return static_cast<bool>(laplace_); }
    double laplace(double lambda) const;           // phi(lambda)
    double laplace_deriv(double lambda, int n) const;  // signed phi^{(n)}
    bool has_laplace_derivs() const { return static_cast<bool>(d1_); }
    bool has_closed_H() const { return static_cast<bool>(h_); }
    double closed_H(double lambda) const;
    bool has_laplace_cx() const { return static_cast<bool>(laplace_cx_); }
    std::complex<double> laplace_cx(std::complex<double> z) const;

    double support_sup() const { return support_sup_; }
    const ModelMeta& meta() const { return meta_; }
    Family family() const { return family_; }
    const std::string& name() const { return name_; }
    const ModelSpec& spec() const { return spec_; }
    double param(const std::string& key, double fallback) const;

    friend LevyModel make_catalog_model(const ModelSpec&);
    friend LevyModel make_custom_model(Density density, double lo, double hi,
                                       std::string name);

  private:
    LevyModel() = default;
    Density density_;
    Scalar tail_;
    Scalar laplace_, d1_, d2_, d3_, h_;
    ComplexFn laplace_cx_;
    double support_sup_ = std::numeric_limits<double>::infinity();
    ModelMeta meta_;
    Family family_ = Family::Custom;
    std::string name_;
    ModelSpec spec_;
};

LevyModel make_catalog_model(const ModelSpec& spec);
// Expression-style custom model: caller supplies the density callable.
LevyModel make_custom_model(LevyModel::Density density, double lo, double hi,
                            std::string name = "custom");

// The canonical catalog exercised by the verification suites.
std::vector<ModelSpec> catalog_specs();

// Geometric-stable Levy density helpers (alpha in (0,1]):
//   series route: alternating Mittag-Leffler series; throws on cancellation.
//   spectral route: completely monotone integral representation.
double geo_levy_density_series(double x, double alpha);
double geo_levy_density_spectral(double x, double alpha);
double mittag_leffler_neg(double z, double alpha);  // E_alpha(-z), z >= 0

}  // namespace subcalc
