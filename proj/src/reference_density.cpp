#include "subcalc/reference_density.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "subcalc/quad.hpp"
#include "subcalc/rng.hpp"
#include "subcalc/roots.hpp"
#include "subcalc/special.hpp"

namespace subcalc {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

std::string method_name(DensityMethod m) {
    switch (m) {
        case DensityMethod::Fourier: return "fourier";
        case DensityMethod::Saddle: return "saddle";
        case DensityMethod::ClosedForm: return "closed_form";
        case DensityMethod::Series: return "series";
        case DensityMethod::MonteCarlo: return "monte_carlo";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Fourier route
// ---------------------------------------------------------------------------

std::pair<double, double> ReferenceDensity::symbol(double xi) const {
    const auto& m = e_->model();
    if (m.has_laplace_cx()) {
        auto v = m.laplace_cx(std::complex<double>(0.0, -xi));
        return {v.real(), v.imag()};
    }
    // A = int (1 - cos(xi s)) nu ds,  B = -int sin(xi s) nu ds
    const double sup = m.support_sup();
    const double split = std::min(kPi / (2.0 * xi), sup);
    auto fA = [&](double s) {
        double z = xi * s;
        double c = z < 1e-4 ? 0.5 * z * z * (1.0 - z * z / 12.0)
                            : 1.0 - std::cos(z);
        return c * m.density(s);
    };
    auto fS = [&](double s) { return std::sin(xi * s) * m.density(s); };
    double A = integrate_to_zero(fA, split, 1e-11).first;
    double S = integrate_to_zero(fS, split, 1e-11).first;
    if (sup > split) {
        if (std::isfinite(sup)) {
            double lo = split;
            double width = kPi / xi;
            while (lo < sup) {
                double hi = std::min(sup, lo + width);
                A += integrate_adaptive(fA, lo, hi, 1e-11, 0.0, 128).first;
                S += integrate_adaptive(fS, lo, hi, 1e-11, 0.0, 128).first;
                lo = hi;
            }
        } else {
            // A over the tail: w(split) - int cos(xi s) nu ds
            double wsplit = e_->w(split);
            double scale_abs = 1e-11 * std::max(wsplit, A + S);
            auto fC = [&](double s) { return std::cos(xi * s) * m.density(s); };
            double C = integrate_oscillatory_tail(fC, split, kPi / xi,
                                                  scale_abs)
                           .first;
            double Stail = integrate_oscillatory_tail(fS, split, kPi / xi,
                                                      scale_abs)
                               .first;
            A += wsplit - C;
            S += Stail;
        }
    }
    return {A, -S};
}

double ReferenceDensity::truncation_xi(double t) const {
    // first xi with t*A(xi) > 40, by geometric scan then bisection
    double xi = 1.0;
    double A = symbol(xi).first;
    int guard = 0;
    if (t * A >= 40.0) {
        while (t * symbol(xi / 2).first >= 40.0 && ++guard < 400) xi /= 2;
        return bisect([&](double z) { return t * symbol(z).first - 40.0; },
                      xi / 2, xi, 1e-3);
    }
    while (t * symbol(xi * 2).first < 40.0 && ++guard < 400) xi *= 2;
    if (guard >= 400)
        throw QuadFailure("fourier: integrand truncation not reached");
    return bisect([&](double z) { return t * symbol(z).first - 40.0; }, xi,
                  xi * 2, 1e-3);
}

DensityEstimate ReferenceDensity::fourier(double t, double x) const {
    const auto& meta = e_->model().meta();
    if (!(t > meta.T0))
        throw ModelError("fourier: needs t > T0 for a bounded density");
    if (!(x > 0)) throw ModelError("fourier: need x > 0");

    auto f = [&](double xi) {
        auto [A, B] = symbol(xi);
        return std::exp(-t * A) * std::cos(xi * x + t * B);
    };

    const double xi_T = truncation_xi(t);
    // stationary-phase region ends around the saddle frequency
    double xi0 = 8.0;
    double p0 = e_->phi_prime_at_zero();
    if (!std::isfinite(p0) || x < t * p0) {
        try {
            xi0 = std::max(xi0, 8.0 * e_->saddle(t, x).sigma);
        } catch (...) {
        }
    }
    xi0 = std::min(xi0, xi_T);

    const double half_period = kPi / x;
    double value = 0.0, err = 0.0;
    // head: resolve panel-by-panel at most a half period wide
    double lo = 0.0;
    while (lo < xi0) {
        double hi = std::min(xi0, lo + std::min(half_period, xi0 / 16.0));
        auto [v, e] = integrate_adaptive(f, lo, hi, 1e-11, 0.0, 256);
        value += v;
        err += e;
        lo = hi;
    }
    double remaining = (xi_T - xi0) / half_period;
    if (remaining <= 64.0) {
        while (lo < xi_T) {
            double hi = std::min(xi_T, lo + half_period);
            auto [v, e] = integrate_adaptive(f, lo, hi, 1e-11, 0.0, 256);
            value += v;
            err += e;
            lo = hi;
        }
    } else {
        double abs_tol = std::max(1e-13, 1e-8 * std::fabs(value));
        auto [v, e] = integrate_oscillatory_tail(f, lo, half_period, abs_tol);
        value += v;
        err += e;
    }
    err += std::exp(-40.0) * xi_T;  // truncation remainder bound
    return {std::max(0.0, value / kPi), DensityMethod::Fourier, err / kPi};
}

// ---------------------------------------------------------------------------
// Saddle (Fourier-Mellin) route
// ---------------------------------------------------------------------------

DensityEstimate ReferenceDensity::saddle(double t, double x,
                                         double* raw_integral) const {
    const auto& meta = e_->model().meta();
    if (!(t > meta.T0))
        throw ModelError("saddle: needs t > T0 for a bounded density");
    SaddleState st = e_->saddle(t, x);
    const double scale = std::sqrt(t * st.neg_phi2);
    const double phi_s = e_->phi(st.sigma);

    auto tM = [&](double u) {
        std::complex<double> z(st.sigma, u / scale);
        std::complex<double> val = t * (e_->phi_cx(z) - phi_s);
        val -= std::complex<double>(0.0, u * x / scale);
        return val;
    };
    auto f = [&](double u) { return std::exp(-tM(u)).real(); };

    // phase advances ~ t phi'(sigma)/scale per unit u in the tail
    const double omega = std::max(1e-12, x / scale);
    const double half_period = kPi / omega;
    const double h = std::min({1.0, half_period / 4.0});

    double integral = 0.0, err = 0.0;
    double lo = 0.0;
    bool cut = false;
    const int kHeadPanels = 512;
    for (int k = 0; k < kHeadPanels; ++k) {
        double hi = lo + h;
        auto [v, e] = integrate_adaptive(f, lo, hi, 1e-11, 0.0, 128);
        integral += v;
        err += e;
        lo = hi;
        if (tM(lo).real() > 40.0 && tM(lo + 0.31 * half_period).real() > 40.0 &&
            tM(lo + 0.77 * half_period).real() > 40.0) {
            cut = true;
            err += std::exp(-40.0) * std::max(1.0, half_period);
            break;
        }
    }
    if (!cut) {
        double abs_tol = std::max(1e-14, 2e-8 * std::fabs(integral));
        auto [v, e] = integrate_oscillatory_tail(f, lo, half_period, abs_tol);
        integral += v;
        err += e;
    }
    double raw = 2.0 * integral;  // conjugate pair doubles the half line
    if (raw_integral) *raw_integral = raw;
    double pref = std::exp(-t * st.H_sigma) / (2.0 * kPi * scale);
    return {pref * raw, DensityMethod::Saddle, pref * 2.0 * err};
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

double geo_log_density_series(double t, double x, double alpha, double guard) {
    if (!(x > 0) || !(t > 0)) throw ModelError("geo series: need t, x > 0");
    const double lx = std::log(x);
    double sum = 0.0, comp = 0.0, max_mag = 0.0;
    bool converged = false;
    double prev_lt = kInf;
    for (int n = 0; n < 6000; ++n) {
        double lt = log_gamma(t + n) - log_gamma(t) -
                    log_gamma(alpha * t + alpha * n) + alpha * n * lx -
                    log_gamma(n + 1.0);
        double mag = std::exp(lt);
        max_mag = std::max(max_mag, mag);
        double term = (n % 2 == 0) ? mag : -mag;
        double y = term - comp;
        double s2 = sum + y;
        comp = (s2 - sum) - y;
        sum = s2;
        if (n > 4 && mag < 1e-16 * std::fabs(sum) && lt < prev_lt) {
            converged = true;
            break;
        }
        prev_lt = lt;
    }
    if (!converged || !(sum > 0) || max_mag > guard * std::fabs(sum))
        throw QuadFailure("geo density series: cancellation guard tripped");
    // terms above already carry the 1/Gamma(t) normalization
    return (alpha * t - 1.0) * lx + std::log(sum);
}

bool ReferenceDensity::has_closed_form() const {
    switch (e_->model().family()) {
        case Family::Gamma:
        case Family::GeometricStable:
            return true;
        case Family::Stable:
            return e_->model().param("alpha", 0.0) == 0.5;
        default:
            return false;
    }
}

double ReferenceDensity::log_closed_form(double t, double x) const {
    const auto& m = e_->model();
    switch (m.family()) {
        case Family::Gamma:
            return (t - 1.0) * std::log(x) - x - log_gamma(t);
        case Family::Stable: {
            if (m.param("alpha", 0.0) != 0.5)
                throw ModelError("closed_form: only stable(1/2) is closed");
            return std::log(t) - 1.5 * std::log(x) - t * t / (4.0 * x) -
                   std::log(2.0 * std::sqrt(kPi));
        }
        case Family::GeometricStable: {
            double a = m.param("alpha", 0.0);
            if (a == 1.0) return (t - 1.0) * std::log(x) - x - log_gamma(t);
            return geo_log_density_series(t, x, a);
        }
        default:
            throw ModelError("closed_form: unsupported model");
    }
}

DensityEstimate ReferenceDensity::closed_form(double t, double x) const {
    double lp = log_closed_form(t, x);
    double v = std::exp(lp);
    DensityMethod meth = e_->model().family() == Family::GeometricStable &&
                                 e_->model().param("alpha", 0.0) != 1.0
                             ? DensityMethod::Series
                             : DensityMethod::ClosedForm;
    return {v, meth, std::fabs(v) * 1e-12};
}

DensityEstimate ReferenceDensity::best(double t, double x) const {
    if (has_closed_form()) {
        try {
            return closed_form(t, x);
        } catch (const QuadFailure&) {
        }
    }
    double p0 = e_->phi_prime_at_zero();
    bool in_saddle_domain = !std::isfinite(p0) || x < t * p0 * (1.0 - 1e-12);
    if (e_->model().has_laplace_cx() && in_saddle_domain) {
        try {
            return saddle(t, x);
        } catch (const QuadFailure&) {
        }
    }
    return fourier(t, x);
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

std::vector<double> ReferenceDensity::sample_paths(double t, std::size_t n,
                                                   double eps,
                                                   std::uint64_t seed) const {
    if (!(t > 0) || !(eps > 0) || n == 0)
        throw ModelError("sample_paths: bad arguments");
    const double w_eps = e_->w(eps);
    if (!(w_eps < 1e7 / static_cast<double>(n)))
        throw ModelError("sample_paths: event budget exceeded; raise eps");

    // inverse-CDF table for the jump law nu restricted above eps
    const auto& m = e_->model();
    double s_max = m.support_sup();
    if (!std::isfinite(s_max))
        s_max = invert_monotone([&](double r) { return e_->w(r); },
                                w_eps * 1e-9, false, std::max(1.0, eps));
    const int kKnots = 4096;
    std::vector<double> ls(kKnots), lw(kKnots);
    const double l0 = std::log(eps), l1 = std::log(s_max);
    for (int i = 0; i < kKnots; ++i) {
        ls[i] = l0 + (l1 - l0) * i / (kKnots - 1);
        double wv = e_->w(std::exp(ls[i]));
        lw[i] = std::log(std::max(wv, w_eps * 1e-12));
    }
    // monotone cubic (Fritsch-Carlson) slopes of log s as a function of log w
    std::vector<double> xw(kKnots), ys(kKnots), slope(kKnots);
    for (int i = 0; i < kKnots; ++i) {
        xw[i] = lw[kKnots - 1 - i];  // increasing log w
        ys[i] = ls[kKnots - 1 - i];
    }
    std::vector<double> d(kKnots - 1);
    for (int i = 0; i + 1 < kKnots; ++i)
        d[i] = (ys[i + 1] - ys[i]) / (xw[i + 1] - xw[i]);
    slope[0] = d[0];
    slope[kKnots - 1] = d[kKnots - 2];
    for (int i = 1; i + 1 < kKnots; ++i) {
        if (d[i - 1] * d[i] <= 0) {
            slope[i] = 0.0;
        } else {
            double w1 = 2 * (xw[i + 1] - xw[i]) + (xw[i] - xw[i - 1]);
            double w2 = (xw[i + 1] - xw[i]) + 2 * (xw[i] - xw[i - 1]);
            slope[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    auto draw_jump = [&](double u) {
        // target tail value w = w_eps * u, u in (0,1)
        double target = lw[0] + std::log(u);
        if (target <= xw.front()) return std::exp(ys.front());
        if (target >= xw.back()) return std::exp(ys.back());
        auto it = std::upper_bound(xw.begin(), xw.end(), target);
        int i = static_cast<int>(it - xw.begin()) - 1;
        double hseg = xw[i + 1] - xw[i];
        double th = (target - xw[i]) / hseg;
        double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
        double h10 = th * (1 - th) * (1 - th);
        double h01 = th * th * (3 - 2 * th);
        double h11 = th * th * (th - 1);
        double lsv = h00 * ys[i] + h10 * hseg * slope[i] + h01 * ys[i + 1] +
                     h11 * hseg * slope[i + 1];
        return std::exp(lsv);
    };

    // deterministic compensation for the removed small jumps
    double comp = 0.0;
    {
        auto f = [&](double s) { return s * m.density(s); };
        comp = t * integrate_to_zero(f, eps, 1e-9).first;
    }

    Rng rng(seed);
    std::vector<double> out(n);
    const double mean_events = t * w_eps;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t k = rng.poisson(mean_events);
        double s = comp;
        for (std::uint64_t j = 0; j < k; ++j) s += draw_jump(rng.uniform());
        out[i] = s;
    }
    return out;
}

DensityEstimate ReferenceDensity::empirical_density(
    const std::vector<double>& samples, double x, double bandwidth) {
    if (samples.empty()) throw ModelError("empirical_density: empty sample set");
    if (!(bandwidth > 0)) throw ModelError("empirical_density: bad bandwidth");
    double sum = 0.0, sum2 = 0.0;
    for (double s : samples) {
        double u = std::fabs(x - s) / bandwidth;
        double k = u < 1.0 ? (1.0 - u) / bandwidth : 0.0;
        sum += k;
        sum2 += k * k;
    }
    const double n = static_cast<double>(samples.size());
    double est = sum / n;
    double var = std::max(0.0, sum2 / n - est * est);
    return {est, DensityMethod::MonteCarlo, std::sqrt(var / n)};
}

}  // namespace subcalc
