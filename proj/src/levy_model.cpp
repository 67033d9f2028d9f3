#include "subcalc/levy_model.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "subcalc/catalog_scales.hpp"
#include "subcalc/quad.hpp"
#include "subcalc/special.hpp"

namespace subcalc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;
}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::Stable: return "stable";
        case Family::TruncatedStable: return "truncated_stable";
        case Family::Gamma: return "gamma";
        case Family::GeometricStable: return "geometric_stable";
        case Family::StableMixture: return "stable_mixture";
        case Family::LogPerturbed: return "log_perturbed";
        case Family::Oscillating: return "oscillating";
        case Family::Custom: return "custom";
    }
    return "custom";
}

Family family_from_name(const std::string& name) {
    for (Family f : {Family::Stable, Family::TruncatedStable, Family::Gamma,
                     Family::GeometricStable, Family::StableMixture,
                     Family::LogPerturbed, Family::Oscillating, Family::Custom})
        if (family_name(f) == name) return f;
    throw ModelError("unknown model family: " + name);
}

// ---------------------------------------------------------------------------
// ModelSpec text form
// ---------------------------------------------------------------------------

std::string ModelSpec::to_string() const {
    std::ostringstream os;
    os << "family " << family << "\n";
    for (const auto& [k, v] : params) {
        os.precision(17);
        os << "param " << k << " = " << v << "\n";
    }
    for (const auto& [s, nu] : grid) {
        os.precision(17);
        os << "grid " << s << " " << nu << "\n";
    }
    return os.str();
}

ModelSpec ModelSpec::parse(const std::string& text) {
    ModelSpec spec;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key.empty() || key[0] == '#') continue;
        if (key == "family") {
            ls >> spec.family;
        } else if (key == "param") {
            std::string name, eq;
            double v;
            if (!(ls >> name >> eq >> v) || eq != "=")
                throw ModelError("model-spec: bad param line: " + line);
            spec.params[name] = v;
        } else if (key == "grid") {
            double s, nu;
            if (!(ls >> s >> nu))
                throw ModelError("model-spec: bad grid line: " + line);
            spec.grid.emplace_back(s, nu);
        } else {
            throw ModelError("model-spec: unknown key: " + key);
        }
    }
    if (spec.family.empty()) throw ModelError("model-spec: missing family");
    return spec;
}

ModelSpec ModelSpec::inline_spec(const std::string& s) {
    ModelSpec spec;
    auto colon = s.find(':');
    spec.family = s.substr(0, colon);
    if (colon != std::string::npos) {
        std::string rest = s.substr(colon + 1);
        std::istringstream rs(rest);
        std::string item;
        while (std::getline(rs, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos)
                throw ModelError("inline model spec: expected k=v in " + item);
            spec.params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        }
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Geometric stable helpers
// ---------------------------------------------------------------------------

double mittag_leffler_neg(double z, double alpha) {
    if (z < 0) throw ModelError("mittag_leffler_neg: need z >= 0");
    if (alpha == 1.0) return std::exp(-z);
    if (z == 0.0) return 1.0;
    const double lz = std::log(z);
    // alternating series sum (-z)^n / Gamma(1+alpha n), compensated
    double sum = 0.0, comp = 0.0, max_mag = 0.0;
    bool converged = false;
    for (int n = 0; n < 4000; ++n) {
        double lt = n * lz - log_gamma(1.0 + alpha * n);
        double mag = std::exp(lt);
        max_mag = std::max(max_mag, mag);
        double term = (n % 2 == 0) ? mag : -mag;
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (n > 4 && mag < 1e-15 * std::fabs(sum) &&
            lt < (n - 1) * lz - log_gamma(1.0 + alpha * (n - 1))) {
            converged = true;
            break;
        }
    }
    if (!converged || max_mag > 1e8 * std::fabs(sum))
        throw QuadFailure("mittag_leffler_neg: series cancellation guard tripped");
    return sum;
}

double geo_levy_density_series(double x, double alpha) {
    if (!(x > 0)) throw ModelError("geo density: need x > 0");
    return alpha / x * mittag_leffler_neg(std::pow(x, alpha), alpha);
}

namespace {
// spectral density of the completely monotone map x -> E_alpha(-x^alpha)
double geo_spectral_kernel(double r, double alpha) {
    const double sa = std::sin(alpha * kPi), ca = std::cos(alpha * kPi);
    double ra = std::pow(r, alpha);
    return std::pow(r, alpha - 1.0) * sa /
           (kPi * (ra * ra + 2.0 * ra * ca + 1.0));
}
}  // namespace

double geo_levy_density_spectral(double x, double alpha) {
    if (!(x > 0)) throw ModelError("geo density: need x > 0");
    if (alpha == 1.0) return std::exp(-x) / x;
    // E_alpha(-x^alpha) = int_0^inf e^{-r x} K_alpha(r) dr
    auto spectral = [&](double r) {
        double a = r * x;
        if (a > 700.0) return 0.0;
        return geo_spectral_kernel(r, alpha) * std::exp(-a);
    };
    const double s0 = std::min(1.0, 1.0 / x);  // peak sits near 1/x
    double v = integrate_to_zero(spectral, s0, 1e-12).first;
    if (s0 < 1.0) v += integrate_log_panels(spectral, s0, 1.0, 1e-12).first;
    v += integrate_decay(spectral, 1.0, 1e-12).first;
    return alpha / x * v;
}

// w(r) = int_r^inf nu = alpha int_0^inf K_alpha(u) E1(u r) du by Fubini
static double geo_tail_spectral(double r, double alpha) {
    if (alpha == 1.0) return -std::expint(-r);
    auto f = [&](double u) {
        double a = u * r;
        if (a > 700.0) return 0.0;
        return geo_spectral_kernel(u, alpha) * (-std::expint(-a));
    };
    const double s0 = std::min(1.0, 1.0 / r);
    double v = integrate_to_zero(f, s0, 1e-11).first;
    if (s0 < 1.0) v += integrate_log_panels(f, s0, 1.0, 1e-11).first;
    v += integrate_decay(f, 1.0, 1e-11).first;
    return alpha * v;
}

// ---------------------------------------------------------------------------
// Catalog construction
// ---------------------------------------------------------------------------

namespace {

double require(const ModelSpec& spec, const std::string& key) {
    auto it = spec.params.find(key);
    if (it == spec.params.end())
        throw ModelError("model " + spec.family + ": missing param " + key);
    return it->second;
}

void check_integrable(const LevyModel& m) {
    // int_0^inf min(1,s) nu(s) ds < infinity; verified to relative 1e-6.
    const double cap = std::min(1.0, m.support_sup());
    auto head = [&](double s) { return s * m.density(s); };
    double total = 0.0;
    try {
        total += integrate_to_zero(head, cap, 1e-6).first;
        if (m.support_sup() > 1.0)
            total += integrate_decay([&](double s) { return m.density(s); },
                                     1.0, 1e-6)
                         .first;
    } catch (const QuadFailure&) {
        throw ModelError("model " + m.name() +
                         ": density is not integrable against min(1,s)");
    }
    if (!std::isfinite(total))
        throw ModelError("model " + m.name() +
                         ": density is not integrable against min(1,s)");
}

ConditionFlags stable_like_flags(double a_small, double a_large, bool global) {
    ConditionFlags f;
    f.E = true;
    f.S1 = f.S2 = f.S3 = f.S = true;
    f.S3star = true;
    f.G = global;
    f.SPure = a_small < 2.0;
    f.L1 = f.L2 = f.L3 = f.L = true;
    f.LPure = a_large < 2.0;
    f.LMixed = false;
    return f;
}

}  // namespace

LevyModel make_custom_model(LevyModel::Density density, double lo, double hi,
                            std::string name) {
    if (lo < 0 || !(hi > lo))
        throw ModelError("custom model: bad support bounds");
    LevyModel m;
    m.family_ = Family::Custom;
    m.name_ = std::move(name);
    m.support_sup_ = hi;
    m.density_ = [density, lo, hi](double s) {
        if (s < lo || s > hi) return 0.0;
        double v = density(s);
        if (v < 0) throw ModelError("custom model: negative density value");
        return v;
    };
    m.meta_.flags.E = false;
    m.spec_.family = "custom";
    check_integrable(m);
    return m;
}

LevyModel make_catalog_model(const ModelSpec& spec) {
    LevyModel m;
    m.spec_ = spec;
    m.family_ = family_from_name(spec.family);
    m.name_ = spec.family;

    switch (m.family_) {
        case Family::Stable: {
            const double a = require(spec, "alpha");
            if (!(a > 0 && a < 1))
                throw ModelError("stable: need 0 < alpha < 1");
            const double c = a / std::tgamma(1.0 - a);
            m.name_ = "stable(" + std::to_string(a) + ")";
            m.density_ = [c, a](double s) { return c * std::pow(s, -1.0 - a); };
            m.tail_ = [c, a](double r) { return c / a * std::pow(r, -a); };
            m.laplace_ = [a](double l) { return std::pow(l, a); };
            m.d1_ = [a](double l) { return a * std::pow(l, a - 1.0); };
            m.d2_ = [a](double l) { return a * (a - 1.0) * std::pow(l, a - 2.0); };
            m.d3_ = [a](double l) {
                return a * (a - 1.0) * (a - 2.0) * std::pow(l, a - 3.0);
            };
            m.h_ = [a](double l) { return (1.0 - a) * std::pow(l, a); };
            m.laplace_cx_ = [a](std::complex<double> z) { return std::pow(z, a); };
            m.meta_.T0 = 0.0;
            m.meta_.alpha1 = m.meta_.alpha2 = m.meta_.alpha3 = m.meta_.alpha4 = a;
            auto& f = m.meta_.flags;
            f = stable_like_flags(a, a, true);
            f.LMixed = a > 1.0;
            break;
        }
        case Family::TruncatedStable: {
            const double a = require(spec, "alpha");
            if (!(a > 0 && a < 1))
                throw ModelError("truncated_stable: need 0 < alpha < 1");
            m.name_ = "truncated_stable(" + std::to_string(a) + ")";
            m.support_sup_ = 1.0;
            m.density_ = [a](double s) {
                return s < 1.0 ? std::pow(s, -1.0 - a) : 0.0;
            };
            m.tail_ = [a](double r) {
                return r < 1.0 ? (std::pow(r, -a) - 1.0) / a : 0.0;
            };
            m.meta_.T0 = 0.0;
            m.meta_.R1 = 1.0;
            m.meta_.R3 = 1.0;
            m.meta_.alpha1 = m.meta_.alpha2 = a;
            auto& f = m.meta_.flags;
            f.E = true;
            f.S1 = f.S2 = f.S3 = f.S = true;
            f.S3star = false;  // density vanishes beyond the cutoff
            f.SPure = a < 2.0;
            f.L3 = true;
            break;
        }
        case Family::Gamma: {
            m.name_ = "gamma";
            m.density_ = [](double s) { return std::exp(-s) / s; };
            m.tail_ = [](double r) { return -std::expint(-r); };  // E1(r)
            m.laplace_ = [](double l) { return std::log1p(l); };
            m.d1_ = [](double l) { return 1.0 / (1.0 + l); };
            m.d2_ = [](double l) { return -1.0 / ((1.0 + l) * (1.0 + l)); };
            m.d3_ = [](double l) {
                double u = 1.0 + l;
                return 2.0 / (u * u * u);
            };
            m.h_ = [](double l) {
                if (l > 1e-4) return std::log1p(l) - l / (1.0 + l);
                // sum_{k>=2} (-1)^k (1-1/k) l^k
                return l * l * (0.5 + l * (-2.0 / 3.0 + l * (0.75 - 0.8 * l)));
            };
            m.laplace_cx_ = [](std::complex<double> z) {
                return std::log(1.0 + z);
            };
            m.meta_.T0 = 1.0;
            auto& f = m.meta_.flags;
            f.E = true;
            f.S1 = false;
            f.S2 = f.S3 = true;
            f.S3star = true;  // decreasing; doubling holds on the test window
            f.S = false;
            f.L1 = true;
            f.L2 = false;
            f.L3 = true;
            f.L = false;
            break;
        }
        case Family::GeometricStable: {
            const double a = require(spec, "alpha");
            if (!(a > 0 && a <= 1))
                throw ModelError("geometric_stable: need 0 < alpha <= 1");
            m.name_ = "geometric_stable(" + std::to_string(a) + ")";
            m.density_ = [a](double x) {
                if (a == 1.0) return std::exp(-x) / x;
                // series while it is well conditioned, spectral otherwise
                if (std::pow(x, a) < 4.0) {
                    try {
                        return geo_levy_density_series(x, a);
                    } catch (const QuadFailure&) {
                    }
                }
                return geo_levy_density_spectral(x, a);
            };
            m.tail_ = [a](double r) { return geo_tail_spectral(r, a); };
            m.laplace_ = [a](double l) { return std::log1p(std::pow(l, a)); };
            m.d1_ = [a](double l) {
                return a * std::pow(l, a - 1.0) / (1.0 + std::pow(l, a));
            };
            m.d2_ = [a](double l) {
                double z = std::pow(l, a), u = 1.0 + z;
                return a * std::pow(l, a - 2.0) * ((a - 1.0) - z) / (u * u);
            };
            m.d3_ = [a](double l) {
                double z = std::pow(l, a), u = 1.0 + z;
                double br = (a - 2.0) * (a - 1.0 - z) * u - a * z * u -
                            2.0 * a * z * (a - 1.0 - z);
                return a * std::pow(l, a - 3.0) * br / (u * u * u);
            };
            m.h_ = [a](double l) {
                double z = std::pow(l, a);
                if (z > 1e-4) return std::log1p(z) - a * z / (1.0 + z);
                return (1.0 - a) * z + (a - 0.5) * z * z +
                       (1.0 / 3.0 - a) * z * z * z;
            };
            m.laplace_cx_ = [a](std::complex<double> z) {
                return std::log(1.0 + std::pow(z, a));
            };
            m.meta_.T0 = 1.0 / a;
            m.meta_.R2 = 1.0;
            m.meta_.alpha3 = m.meta_.alpha4 = a;
            auto& f = m.meta_.flags;
            f.E = true;
            f.S1 = false;
            f.S2 = f.S3 = true;
            f.S3star = true;
            f.S = false;
            f.L1 = f.L2 = f.L3 = f.L = true;
            f.LPure = a < 2.0;
            f.LMixed = a > 1.0;
            break;
        }
        case Family::StableMixture: {
            // params alpha1,w1,alpha2,w2,... discrete mixture on [a_lo, a_hi]
            std::vector<std::pair<double, double>> comps;
            for (int i = 1;; ++i) {
                auto ai = spec.params.find("alpha" + std::to_string(i));
                auto wi = spec.params.find("w" + std::to_string(i));
                if (ai == spec.params.end()) break;
                double weight = wi == spec.params.end() ? 1.0 : wi->second;
                if (!(ai->second > 0 && ai->second < 1) || !(weight > 0))
                    throw ModelError("stable_mixture: bad component");
                comps.emplace_back(ai->second, weight);
            }
            if (comps.empty())
                throw ModelError("stable_mixture: needs alpha1[,w1],...");
            m.name_ = "stable_mixture";
            double a_lo = comps[0].first, a_hi = comps[0].first;
            for (auto& [a, w] : comps) {
                a_lo = std::min(a_lo, a);
                a_hi = std::max(a_hi, a);
            }
            m.density_ = [comps](double s) {
                double v = 0;
                for (auto& [a, w] : comps)
                    v += w * a / std::tgamma(1.0 - a) * std::pow(s, -1.0 - a);
                return v;
            };
            m.tail_ = [comps](double r) {
                double v = 0;
                for (auto& [a, w] : comps)
                    v += w / std::tgamma(1.0 - a) * std::pow(r, -a);
                return v;
            };
            m.laplace_ = [comps](double l) {
                double v = 0;
                for (auto& [a, w] : comps) v += w * std::pow(l, a);
                return v;
            };
            m.d1_ = [comps](double l) {
                double v = 0;
                for (auto& [a, w] : comps) v += w * a * std::pow(l, a - 1.0);
                return v;
            };
            m.d2_ = [comps](double l) {
                double v = 0;
                for (auto& [a, w] : comps)
                    v += w * a * (a - 1.0) * std::pow(l, a - 2.0);
                return v;
            };
            m.d3_ = [comps](double l) {
                double v = 0;
                for (auto& [a, w] : comps)
                    v += w * a * (a - 1.0) * (a - 2.0) * std::pow(l, a - 3.0);
                return v;
            };
            m.h_ = [comps](double l) {
                double v = 0;
                for (auto& [a, w] : comps) v += w * (1.0 - a) * std::pow(l, a);
                return v;
            };
            m.laplace_cx_ = [comps](std::complex<double> z) {
                std::complex<double> v = 0;
                for (auto& [a, w] : comps) v += w * std::pow(z, a);
                return v;
            };
            m.meta_.T0 = 0.0;
            m.meta_.alpha1 = a_lo;
            m.meta_.alpha2 = a_hi;
            m.meta_.alpha3 = a_lo;
            m.meta_.alpha4 = a_hi;
            auto& f = m.meta_.flags;
            f = stable_like_flags(a_hi, a_hi, true);
            f.SPure = a_hi < 2.0;
            f.LPure = a_hi < 2.0;
            f.LMixed = a_lo > 1.0;
            break;
        }
        case Family::LogPerturbed: {
            const double g1 = require(spec, "gamma1");
            const double p = require(spec, "p");
            const double g2 = require(spec, "gamma2");
            const double q = require(spec, "q");
            if (g1 < 0 || g1 > 1 || g2 <= 1 || (g1 == 0 && p <= 0) ||
                (g1 == 1 && p >= -1))
                throw ModelError("log_perturbed: parameters out of range");
            m.name_ = "log_perturbed(" + std::to_string(g1) + "," +
                      std::to_string(p) + "," + std::to_string(g2) + "," +
                      std::to_string(q) + ")";
            m.density_ = [g1, p, g2, q](double s) {
                if (s <= 1.0)
                    return std::pow(s, -1.0 - g1) *
                           std::pow(std::log1p(1.0 / s), p);
                return std::pow(s, -1.0 - g2) * std::pow(std::log1p(s), q);
            };
            m.meta_.T0 = 0.0;
            m.meta_.R1 = 1.0;
            m.meta_.R2 = 1.0;
            m.meta_.R3 = 1.0;
            m.meta_.alpha1 = m.meta_.alpha2 = g1 > 0 ? std::optional(g1) : std::nullopt;
            m.meta_.alpha3 = m.meta_.alpha4 = g2;
            auto& f = m.meta_.flags;
            f.E = true;
            f.S1 = g1 > 0;
            f.S2 = true;
            f.S3 = true;
            f.S3star = true;
            f.S = f.S1;
            f.SPure = f.S && g1 < 2.0;
            f.L1 = f.L2 = f.L3 = f.L = true;
            f.LPure = g2 < 2.0;
            f.LMixed = g2 > 1.0;
            break;
        }
        case Family::Oscillating: {
            auto osc = std::make_shared<OscillatingSpec>();
            m.name_ = "oscillating";
            m.density_ = [osc](double s) { return 1.0 / (s * osc->psi_d(s)); };
            m.meta_.T0 = 0.0;
            m.meta_.alpha1 = 0.5;
            m.meta_.alpha2 = 4.0;
            m.meta_.alpha3 = 0.5;
            m.meta_.alpha4 = 4.0;
            auto& f = m.meta_.flags;
            f.E = true;
            f.S1 = f.S2 = f.S3 = f.S = f.G = true;
            f.S3star = true;
            f.SPure = false;
            f.L1 = f.L2 = f.L3 = f.L = true;
            f.LPure = false;
            f.LMixed = false;
            break;
        }
        case Family::Custom: {
            if (spec.grid.size() < 2)
                throw ModelError("custom: needs at least two grid knots");
            auto knots = spec.grid;
            std::sort(knots.begin(), knots.end());
            for (auto& [s, nu] : knots)
                if (!(s > 0) || nu < 0)
                    throw ModelError("custom: knots need s>0, nu>=0");
            const double lo = knots.front().first, hi = knots.back().first;
            m.name_ = "custom";
            m.support_sup_ = hi;
            m.density_ = [knots](double s) {
                if (s < knots.front().first || s > knots.back().first)
                    return 0.0;  // extrapolation forbidden; no mass outside
                auto it = std::lower_bound(
                    knots.begin(), knots.end(), std::make_pair(s, -1.0));
                if (it == knots.begin()) return it->second;
                auto [s1, v1] = *std::prev(it);
                auto [s2, v2] = *it;
                if (v1 <= 0 || v2 <= 0) return 0.0;
                double u = (std::log(s) - std::log(s1)) /
                           (std::log(s2) - std::log(s1));
                return std::exp((1 - u) * std::log(v1) + u * std::log(v2));
            };
            (void)lo;
            m.meta_.flags.E = false;
            break;
        }
    }
    check_integrable(m);
    return m;
}

// ---------------------------------------------------------------------------

double LevyModel::density(double s) const {
    if (!(s > 0)) throw ModelError("density: need s > 0");
    return density_(s);
}

double LevyModel::tail(double r) const {
    if (!(r > 0)) throw ModelError("tail: need r > 0");
    if (r >= support_sup_) return 0.0;
    if (tail_) return tail_(r);
    double hi = support_sup_;
    if (std::isfinite(hi)) {
        return integrate_adaptive([this](double s) { return density_(s); }, r,
                                  hi, 1e-10)
            .first;
    }
    return integrate_decay([this](double s) { return density_(s); }, r, 1e-10)
        .first;
}

double LevyModel::laplace(double lambda) const {
    if (!laplace_) throw ModelError("laplace: no closed form on this model");
    return laplace_(lambda);
}

double LevyModel::laplace_deriv(double lambda, int n) const {
    if (n == 0) return laplace(lambda);
    const Scalar* f = n == 1 ? &d1_ : n == 2 ? &d2_ : &d3_;
    if (n < 1 || n > 3 || !*f)
        throw ModelError("laplace_deriv: no closed form for this order");
    return (*f)(lambda);
}

double LevyModel::closed_H(double lambda) const {
    if (!h_) throw ModelError("closed_H: no closed form on this model");
    return h_(lambda);
}

std::complex<double> LevyModel::laplace_cx(std::complex<double> z) const {
    if (!laplace_cx_) throw ModelError("laplace_cx: no closed form");
    return laplace_cx_(z);
}

double LevyModel::param(const std::string& key, double fallback) const {
    auto it = spec_.params.find(key);
    return it == spec_.params.end() ? fallback : it->second;
}

std::vector<ModelSpec> catalog_specs() {
    std::vector<ModelSpec> out;
    out.push_back(ModelSpec::inline_spec("stable:alpha=0.5"));
    out.push_back(ModelSpec::inline_spec("stable:alpha=0.8"));
    out.push_back(ModelSpec::inline_spec("truncated_stable:alpha=0.5"));
    out.push_back(ModelSpec::inline_spec("gamma"));
    out.push_back(ModelSpec::inline_spec("geometric_stable:alpha=0.7"));
    out.push_back(ModelSpec::inline_spec(
        "stable_mixture:alpha1=0.3,w1=0.5,alpha2=0.6,w2=0.5"));
    out.push_back(
        ModelSpec::inline_spec("log_perturbed:gamma1=0.5,p=1,gamma2=3,q=0"));
    out.push_back(ModelSpec::inline_spec("oscillating"));
    return out;
}

}  // namespace subcalc
