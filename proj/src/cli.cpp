#include "subcalc/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "subcalc/asymptotics.hpp"
#include "subcalc/catalog_scales.hpp"
#include "subcalc/conditions.hpp"
#include "subcalc/envelope.hpp"
#include "subcalc/levy_model.hpp"
#include "subcalc/phi_evaluator.hpp"
#include "subcalc/quad.hpp"
#include "subcalc/reference_density.hpp"
#include "subcalc/roots.hpp"

namespace subcalc {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

LevyModel load_model(const std::string& arg) {
    if (arg.empty()) throw ConfigError("missing --model");
    if (arg[0] == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw ConfigError("cannot open model file " + arg.substr(1));
        std::stringstream ss;
        ss << in.rdbuf();
        return make_catalog_model(ModelSpec::parse(ss.str()));
    }
    return make_catalog_model(ModelSpec::inline_spec(arg));
}

std::vector<double> default_lambda_grid() {
    GridSpec g{1e-3, 1e3, 25, true};
    return g.points();
}

std::vector<double> default_t_grid() {
    GridSpec g{0.5, 8.0, 5, true};
    return g.points();
}

void cmd_calculus(const RunConfig& cfg, const PhiEvaluator& e,
                  std::ostream& os) {
    auto lams = cfg.x_grid.set() ? cfg.x_grid.points() : default_lambda_grid();
    auto ts = cfg.t_grid.set() ? cfg.t_grid.points() : default_t_grid();
    os << "quantity,arg1,arg2,value\n";
    for (double l : lams) {
        os << "phi," << fmt(l) << ",," << fmt(e.phi(l)) << "\n";
        os << "phi1," << fmt(l) << ",," << fmt(e.phi_deriv(l, 1)) << "\n";
        os << "phi2," << fmt(l) << ",," << fmt(e.phi_deriv(l, 2)) << "\n";
        os << "H," << fmt(l) << ",," << fmt(e.H(l)) << "\n";
        os << "w," << fmt(l) << ",," << fmt(e.w(l)) << "\n";
    }
    for (double t : ts) {
        double b = e.b(t);
        double s_star = e.spatial_scale(t);
        double D = e.D(t);
        os << "b," << fmt(t) << ",," << fmt(b) << "\n";
        os << "scale," << fmt(t) << ",," << fmt(s_star) << "\n";
        os << "D," << fmt(t) << ",," << fmt(D) << "\n";
        std::vector<double> ys = cfg.y_grid.set()
                                     ? cfg.y_grid.points()
                                     : std::vector<double>{0.0, 0.5 * s_star,
                                                           s_star,
                                                           0.5 * (s_star + D),
                                                           D, 2.0 * D};
        for (double y : ys) {
            auto th = e.theta(t, y);
            os << "theta," << fmt(t) << "," << fmt(y) << "," << fmt(th.theta)
               << "\n";
        }
    }
    bool script_ok = e.model().meta().flags.LMixed ||
                     std::isfinite(e.phi_prime_at_zero());
    if (script_ok) {
        for (double r : lams) {
            try {
                os << "scriptH," << fmt(r) << ",," << fmt(e.script_H(r))
                   << "\n";
            } catch (const ModelError&) {
                break;
            }
        }
    }
}

void cmd_envelope(const RunConfig& cfg, const PhiEvaluator& e,
                  std::ostream& os) {
    if (!cfg.t_grid.set() || !cfg.x_grid.set())
        throw ConfigError("envelope: needs --t and --x grids");
    Envelope env(e);
    os << "t,x,regime,y,lower,upper\n";
    for (double t : cfg.t_grid.points()) {
        for (double x : cfg.x_grid.points()) {
            Regime r = env.classify(t, x);
            double lo, hi;
            if (r.tag == RegimeTag::LeftTail) {
                auto res = env.left_tail(t, x);
                lo = res.lower;
                hi = res.upper;
            } else {
                lo = env.right_tail(t, r.y, 1.0);
                hi = env.right_tail(t, r.y, 1.0 / 8.0);
            }
            os << fmt(t) << "," << fmt(x) << "," << regime_name(r.tag) << ","
               << fmt(r.y) << "," << fmt(lo) << "," << fmt(hi) << "\n";
        }
    }
}

void cmd_density(const RunConfig& cfg, const PhiEvaluator& e,
                 std::ostream& os) {
    if (!cfg.t_grid.set() || !cfg.x_grid.set())
        throw ConfigError("density: needs --t and --x grids");
    ReferenceDensity ref(e);
    os << "t,x,method,value,err\n";
    for (double t : cfg.t_grid.points()) {
        std::vector<double> mc;
        if (cfg.method == "mc")
            mc = ref.sample_paths(t, 100000, 1e-4, cfg.seed);
        for (double x : cfg.x_grid.points()) {
            DensityEstimate d;
            if (cfg.method == "fourier") {
                d = ref.fourier(t, x);
            } else if (cfg.method == "saddle") {
                d = ref.saddle(t, x);
            } else if (cfg.method == "closed" || cfg.method == "series") {
                d = ref.closed_form(t, x);
            } else if (cfg.method == "mc") {
                d = ReferenceDensity::empirical_density(
                    mc, x, std::max(0.02, 0.05 * x));
            } else if (cfg.method == "best") {
                d = ref.best(t, x);
            } else {
                throw ConfigError("density: unknown method " + cfg.method);
            }
            os << fmt(t) << "," << fmt(x) << "," << method_name(d.method)
               << "," << fmt(d.value) << "," << fmt(d.err) << "\n";
        }
    }
}

void cmd_certify(const RunConfig& cfg, const PhiEvaluator& e,
                 std::ostream& os) {
    if (!cfg.t_grid.set() || !cfg.x_grid.set())
        throw ConfigError("certify: needs --t and --x grids");
    Envelope env(e);
    ReferenceDensity ref(e);
    struct Obs {
        double t, x;
        RegimeTag tag;
        double p;
    };
    std::vector<Obs> obs;
    for (double t : cfg.t_grid.points())
        for (double x : cfg.x_grid.points()) {
            DensityEstimate d = cfg.method == "saddle" ? ref.saddle(t, x)
                                : cfg.method == "fourier"
                                    ? ref.fourier(t, x)
                                    : ref.best(t, x);
            if (d.value > 0)
                obs.push_back({t, x, env.classify(t, x).tag, d.value});
        }
    const double cands[] = {0.125, 0.25, 0.5, 1.0, 2.0, 4.0};
    double best_c = 1.0, best_spread = 1e300;
    for (double c : cands) {
        double lo = 1e300, hi = 0;
        for (const auto& o : obs) {
            double envv = env.piecewise_value(o.t, o.x, c);
            double r = o.p / envv;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        if (hi / lo < best_spread) {
            best_spread = hi / lo;
            best_c = c;
        }
    }
    std::map<RegimeTag, std::pair<double, double>> per;
    double lo_all = 1e300, hi_all = 0;
    std::map<RegimeTag, int> count;
    for (const auto& o : obs) {
        double r = o.p / env.piecewise_value(o.t, o.x, best_c);
        auto& pr = per.emplace(o.tag, std::make_pair(1e300, 0.0)).first->second;
        pr.first = std::min(pr.first, r);
        pr.second = std::max(pr.second, r);
        ++count[o.tag];
        lo_all = std::min(lo_all, r);
        hi_all = std::max(hi_all, r);
    }
    os << "{\n  \"model\": \"" << e.model().name() << "\",\n";
    os << "  \"method\": \"" << cfg.method << "\",\n";
    os << "  \"c_exp\": " << fmt(best_c) << ",\n";
    os << "  \"points\": " << obs.size() << ",\n";
    os << "  \"C_low\": " << fmt(lo_all) << ",\n";
    os << "  \"C_high\": " << fmt(hi_all) << ",\n";
    os << "  \"spread\": " << fmt(hi_all / lo_all) << ",\n";
    os << "  \"regimes\": [\n";
    bool first = true;
    for (auto& [tag, pr] : per) {
        if (!first) os << ",\n";
        first = false;
        os << "    {\"regime\": \"" << regime_name(tag)
           << "\", \"points\": " << count[tag]
           << ", \"ratio_min\": " << fmt(pr.first)
           << ", \"ratio_max\": " << fmt(pr.second)
           << ", \"spread\": " << fmt(pr.second / pr.first) << "}";
    }
    os << "\n  ]\n}\n";
}

void cmd_conditions(const RunConfig& cfg, const LevyModel& m,
                    std::ostream& os) {
    (void)cfg;
    ConditionVerifier ver(m);
    ConditionReport rep = ver.classify();
    os << rep.to_json();
}

void cmd_asymptotics(const RunConfig& cfg, const PhiEvaluator& e,
                     std::ostream& os) {
    ReferenceDensity ref(e);
    auto ts = cfg.t_grid.set() ? cfg.t_grid.points()
                               : std::vector<double>{5, 10, 20, 50};
    auto xs = cfg.x_grid.set() ? cfg.x_grid.points()
                               : std::vector<double>{0.5, 1.0};
    os << "kind,alpha,t,x,k,value\n";
    for (double t : ts)
        for (double x : xs) {
            double r = limit_ratio(e, ref, t, x);
            os << "limit_ratio,," << fmt(t) << "," << fmt(x) << ",,"
               << fmt(r) << "\n";
        }
    if (e.model().family() == Family::GeometricStable) {
        double a = e.model().param("alpha", 1.0);
        std::vector<int> ks{0};
        if (a > 0.5) ks.push_back(1);
        if (a > 1.0 / 3.0 && a <= 0.5) ks.push_back(2);
        for (double t : ts)
            for (double x : xs)
                for (int k : ks) {
                    if (!(a * t / x > 2.0)) continue;
                    os << "geo_asymp," << fmt(a) << "," << fmt(t) << ","
                       << fmt(x) << "," << k << ","
                       << fmt(geo_asymp(t, x, a, k)) << "\n";
                }
    }
}

void cmd_example42(const RunConfig& cfg, std::ostream& os) {
    OscillatingSpec osc;
    os << "n,parity,log_t,log_y,envelope_log,dominant_term\n";
    auto emit = [&](LogReal t, LogReal y) {
        auto env = osc.window_envelope(t, y);
        std::string dom = "single";
        if (env.even) {
            dom = env.exp_term->log() > env.power_term->log() ? "exp" : "power";
        }
        os << env.n << "," << (env.even ? "even" : "odd") << ","
           << fmt(t.log()) << "," << fmt(y.log()) << ","
           << fmt(env.value.log()) << "," << dom << "\n";
    };
    // even window around t_2
    LogReal t2 = osc.t_window(2);
    double a2 = osc.a(2).value();
    std::vector<double> ys;
    if (cfg.y_grid.set())
        ys = cfg.y_grid.points();
    else
        for (int i = 0; i <= 8; ++i)
            ys.push_back(a2 * std::pow(std::pow(std::log(a2), 1.0 / 3.0),
                                       i / 8.0));
    for (double y : ys) emit(t2, LogReal::from_value(y));
    // odd window at t_3 stays in the log domain
    LogReal t3 = osc.t_window(3);
    for (double frac : {0.5, 0.8, 0.9, 1.0})
        emit(t3, osc.a(3).pow(frac));
}

}  // namespace

GridSpec GridSpec::parse(const std::string& s) {
    GridSpec g;
    std::istringstream is(s);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(is, part, ':')) parts.push_back(part);
    if (parts.size() < 3 || parts.size() > 4)
        throw ConfigError("grid spec must be lo:hi:n[:log]: " + s);
    g.lo = std::stod(parts[0]);
    g.hi = std::stod(parts[1]);
    g.n = std::stoi(parts[2]);
    if (parts.size() == 4) {
        if (parts[3] != "log") throw ConfigError("grid spec: bad tag " + parts[3]);
        g.log_spaced = true;
    }
    if (g.n <= 0 || !(g.hi >= g.lo))
        throw ConfigError("grid spec: empty grid " + s);
    if (g.log_spaced && !(g.lo > 0))
        throw ConfigError("grid spec: log grid needs lo > 0");
    return g;
}

std::vector<double> GridSpec::points() const {
    std::vector<double> pts;
    if (n == 1) return {lo};
    for (int i = 0; i < n; ++i) {
        double u = static_cast<double>(i) / (n - 1);
        pts.push_back(log_spaced ? lo * std::pow(hi / lo, u)
                                 : lo + (hi - lo) * u);
    }
    return pts;
}

int run(const RunConfig& cfg, std::ostream& err) {
    try {
        std::ofstream file;
        std::ostringstream buffer;
        std::ostream* osp = &buffer;

        if (cfg.cmd == "example42") {
            cmd_example42(cfg, *osp);
        } else {
            LevyModel model = load_model(cfg.model);
            if (cfg.cmd == "conditions") {
                cmd_conditions(cfg, model, *osp);
            } else {
                PhiEvaluator e(std::move(model), cfg.tol);
                if (cfg.cmd == "calculus")
                    cmd_calculus(cfg, e, *osp);
                else if (cfg.cmd == "envelope")
                    cmd_envelope(cfg, e, *osp);
                else if (cfg.cmd == "density")
                    cmd_density(cfg, e, *osp);
                else if (cfg.cmd == "certify")
                    cmd_certify(cfg, e, *osp);
                else if (cfg.cmd == "asymptotics")
                    cmd_asymptotics(cfg, e, *osp);
                else
                    throw ConfigError("unknown command: " + cfg.cmd);
            }
        }
        if (cfg.out.empty()) {
            std::cout << buffer.str();
        } else {
            file.open(cfg.out, std::ios::binary);
            if (!file) throw ConfigError("cannot open output " + cfg.out);
            file << buffer.str();
        }
        return 0;
    } catch (const ConfigError& ex) {
        err << "error: config: " << ex.what() << "\n";
        return 2;
    } catch (const ModelError& ex) {
        err << "error: config: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        err << "error: numeric: " << ex.what() << "\n";
        return 3;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& err) {
    RunConfig cfg;
    try {
        for (std::size_t i = 0; i < args.size(); ++i) {
            const std::string& a = args[i];
            auto next = [&]() -> const std::string& {
                if (i + 1 >= args.size())
                    throw ConfigError("flag " + a + " needs a value");
                return args[++i];
            };
            if (a == "--model") cfg.model = next();
            else if (a == "--cmd") cfg.cmd = next();
            else if (a == "--t") cfg.t_grid = GridSpec::parse(next());
            else if (a == "--x") cfg.x_grid = GridSpec::parse(next());
            else if (a == "--y") cfg.y_grid = GridSpec::parse(next());
            else if (a == "--seed") cfg.seed = std::stoull(next());
            else if (a == "--out") cfg.out = next();
            else if (a == "--method") cfg.method = next();
            else if (a == "--tol") cfg.tol = std::stod(next());
            else if (!a.empty() && a[0] != '-' && cfg.cmd.empty()) cfg.cmd = a;
            else throw ConfigError("unknown flag: " + a);
        }
        if (cfg.cmd.empty()) throw ConfigError("missing command (--cmd)");
    } catch (const std::exception& ex) {
        err << "error: config: " << ex.what() << "\n";
        return 2;
    }
    return run(cfg, err);
}

}  // namespace subcalc
