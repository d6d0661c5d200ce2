#include "validate.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <random>
#include <sstream>
#include <vector>

#include "brute_force.hpp"
#include "dnak/dnak.h"
#include "sweep.hpp"

namespace dnak_cli {

namespace {

struct Reporter {
    std::ostream& out;
    int failures = 0;

    void line(int criterion, bool pass, const std::string& detail, double seconds) {
        if (!pass) ++failures;
        out << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << detail
            << "  (" << std::fixed << std::setprecision(1) << seconds << " s)\n"
            << std::defaultfloat;
        out.flush();
    }
};

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(3) << v;
    return s.str();
}

dnak_keyhole_config reference_config(int m, int n, double doppler) {
    return dnak_keyhole_config{m, n, 1.0, 1.0, 1.0, 1.0, doppler, doppler, 1.0, 1.0};
}

double must(dnak_status st, const char* what) {
    if (st != DNAK_OK)
        throw std::runtime_error(std::string(what) + ": " + dnak_last_error());
    return 0.0;
}

// Worst |approx/exact - 1| of the chosen statistic over the reference grid.
struct Deviation {
    double worst = 0.0;
    int worst_mn[2] = {0, 0};
    double worst_db = 0.0;
};

template <typename StatFn>
Deviation laplace_deviation(StatFn&& stat) {
    const int antenna_pairs[3][2] = {{1, 1}, {2, 2}, {3, 2}};
    Deviation dev;
    for (const auto& mn : antenna_pairs) {
        const dnak_keyhole_config cfg = reference_config(mn[0], mn[1], 10.0);
        for (int i = 0; i < 41; ++i) {
            const double db = -30.0 + i;
            double gamma = 0.0;
            must(dnak_keyhole_threshold_from_normalized_db(&cfg, db, &gamma), "grid");
            const double exact = stat(cfg, gamma, DNAK_METHOD_EXACT);
            const double approx = stat(cfg, gamma, DNAK_METHOD_LAPLACE);
            const double d = std::fabs(approx - exact) / exact;
            if (d > dev.worst) {
                dev.worst = d;
                dev.worst_mn[0] = mn[0];
                dev.worst_mn[1] = mn[1];
                dev.worst_db = db;
            }
        }
    }
    return dev;
}

void criterion_lcr_approximation(Reporter& rep) {
    Timer t;
    const Deviation dev = laplace_deviation(
        [](const dnak_keyhole_config& cfg, double gamma, dnak_method m) {
            double v = 0.0;
            must(dnak_keyhole_snr_lcr(&cfg, gamma, m, nullptr, &v), "snr_lcr");
            return v;
        });
    std::ostringstream d;
    d << "exact-vs-closed-form LCR within 5% on 41 points x {(1,1),(2,2),(3,2)}; worst "
      << fmt(dev.worst) << " at (M,N)=(" << dev.worst_mn[0] << "," << dev.worst_mn[1]
      << "), " << dev.worst_db << " dB";
    rep.line(1, dev.worst <= 0.05, d.str(), t.seconds());
}

void criterion_afd_approximation(Reporter& rep) {
    Timer t;
    const Deviation dev = laplace_deviation(
        [](const dnak_keyhole_config& cfg, double gamma, dnak_method m) {
            double v = 0.0;
            must(dnak_keyhole_snr_aod(&cfg, gamma, m, nullptr, &v), "snr_aod");
            return v;
        });
    std::ostringstream d;
    d << "exact-vs-closed-form AFD within 5% on 41 points x {(1,1),(2,2),(3,2)}; worst "
      << fmt(dev.worst) << " at (M,N)=(" << dev.worst_mn[0] << "," << dev.worst_mn[1]
      << "), " << dev.worst_db << " dB";
    rep.line(2, dev.worst <= 0.05, d.str(), t.seconds());
}

void criterion_monte_carlo(Reporter& rep) {
    Timer t;
    const double doppler = 50.0;
    const dnak_keyhole_config cfg = reference_config(2, 2, doppler);
    // 128 oscillators keep the synthesis error well below the sampling-rate
    // floor; the sample rate itself is pinned at 64 f_d by the gate.
    const dnak_doppler_spec spec{doppler, 128, 64.0 * doppler};
    const std::size_t n_samples = 20000000;

    dnak_rng* rng = dnak_rng_create(0x5eed2024, 0);
    dnak_trace* trace = nullptr;
    must(dnak_keyhole_snr_trace(&cfg, &spec, &spec, n_samples, rng, &trace), "trace");

    int failing = 0;
    double worst_pull = 0.0, worst_db = 0.0;
    for (int j = 0; j < 10; ++j) {
        const double db = -20.0 + 25.0 * j / 9.0;
        double gamma = 0.0, exact = 0.0;
        must(dnak_keyhole_threshold_from_normalized_db(&cfg, db, &gamma), "grid");
        must(dnak_keyhole_snr_lcr(&cfg, gamma, DNAK_METHOD_EXACT, nullptr, &exact), "lcr");
        dnak_crossing_stats st{};
        must(dnak_trace_crossing_stats(trace, gamma, &st), "stats");
        const double sigma = std::sqrt(static_cast<double>(st.down_crossings)) / st.duration_s;
        const double pull = sigma > 0.0 ? std::fabs(st.lcr_hz - exact) / sigma : 1e9;
        if (pull > worst_pull) {
            worst_pull = pull;
            worst_db = db;
        }
        if (pull > 3.0) ++failing;
    }
    dnak_trace_destroy(trace);
    dnak_rng_destroy(rng);

    std::ostringstream d;
    d << "Monte Carlo LCR within 3 sigma of exact at 10 points in -20..+5 dB, (M,N)=(2,2), "
      << "2e7 samples at 64 f_d; " << failing << "/10 points out of band, worst pull "
      << fmt(worst_pull) << " sigma at " << fmt(worst_db) << " dB";
    rep.line(3, failing == 0, d.str(), t.seconds());
}

void criterion_rice_brute_force(Reporter& rep) {
    Timer t;
    std::mt19937_64 gen(771234);
    auto unif = [&gen](double lo, double hi) {
        return lo + (hi - lo) * std::generate_canonical<double, 53>(gen);
    };
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
        const dnak_double_nakagami_params p{
            {0.5 + unif(0.0, 3.0), unif(0.4, 2.5), unif(0.5, 2.0)},
            {0.5 + unif(0.0, 3.0), unif(0.4, 2.5), unif(0.5, 2.0)}};
        const double z = unif(0.3, 1.8);
        double exact = 0.0;
        must(dnak_double_lcr_exact(&p, z, nullptr, &exact), "lcr_exact");
        double sx = 0.0, sy = 0.0;
        must(dnak_nakagami_derivative_std(&p.x_branch, &sx), "sigma");
        must(dnak_nakagami_derivative_std(&p.y_branch, &sy), "sigma");
        const double ref = brute::rice_lcr_2d(p.x_branch.m, p.x_branch.omega, p.y_branch.m,
                                              p.y_branch.omega, sx, sy, z);
        worst = std::max(worst, std::fabs(exact - ref) / ref);
    }
    std::ostringstream d;
    d << "exact LCR vs direct 2-D crossing-rate quadrature within 1e-6 at 5 random points; "
      << "worst " << fmt(worst);
    rep.line(4, worst <= 1e-6, d.str(), t.seconds());
}

void criterion_cdf_fixture(Reporter& rep) {
    Timer t;
    // Frozen evaluations of the product-process distribution from a
    // 40-digit computer-algebra run: {m_x, m_y, omega_x, omega_y, z, F}.
    static const double fixture[12][6] = {
        {1, 1, 1, 1, 1, 0.7202682363669551454308},
        {1, 1, 1, 1, 0.1, 0.04480549135590555025009},
        {2, 2, 2, 2, 0.5, 0.03710374313310261491026},
        {2, 2, 2, 2, 2.5, 0.8072440334268266190126},
        {3, 2, 3, 2, 1.2, 0.1618787211822377594537},
        {0.5, 0.5, 1, 1, 0.8, 0.7287606306051858379622},
        {1.5, 1.5, 0.5, 2, 0.9, 0.6197989153590402982575},
        {2.5, 1.7, 1.3, 0.6, 1.1, 0.8048236415477628633624},
        {3.5, 1.5, 1, 1, 0.4, 0.1210240034321446216271},
        {6, 2, 4, 1, 1.9, 0.5798164068679903888243},
        {1, 3, 2, 5, 3.2, 0.6838678150295649604859},
        {4.25, 0.75, 2.2, 1.4, 0.65, 0.2185113598117245088112},
    };
    double worst = 0.0;
    for (const auto& row : fixture) {
        const dnak_double_nakagami_params p{{row[0], row[2], 1.0}, {row[1], row[3], 1.0}};
        double f = 0.0;
        must(dnak_double_cdf(&p, row[4], nullptr, &f), "cdf");
        worst = std::max(worst, std::fabs(f - row[5]));
    }
    std::ostringstream d;
    d << "cdf matches 12 frozen computer-algebra values within 1e-8; worst " << fmt(worst);
    rep.line(5, worst <= 1e-8, d.str(), t.seconds());
}

void criterion_laplace_core(Reporter& rep) {
    Timer t;
    std::mt19937_64 gen(90210);
    auto unif = [&gen](double lo, double hi) {
        return lo + (hi - lo) * std::generate_canonical<double, 53>(gen);
    };

    bool pass = true;
    std::string why;

    // symmetric closed forms
    for (int k = 0; k < 50 && pass; ++k) {
        const double m = 0.5 + unif(0.0, 4.5);
        const double omega = unif(0.25, 4.0);
        const double z = unif(0.05, 5.0);
        const dnak_double_nakagami_params p{{m, omega, unif(0.2, 3.0)},
                                            {m, omega, unif(0.2, 3.0)}};
        dnak_laplace_core core{};
        must(dnak_double_laplace_core(&p, z, &core), "core");
        double sx = 0.0, sy = 0.0;
        must(dnak_nakagami_derivative_std(&p.x_branch, &sx), "sigma");
        must(dnak_nakagami_derivative_std(&p.y_branch, &sy), "sigma");
        const double x0_ref = std::sqrt(z);
        const double f_ref = 2.0 * m * z / omega;
        const double f2_ref = 8.0 * m / omega;
        const double g_ref = std::sqrt(1.0 + (sx / sy) * (sx / sy));
        auto bad = [](double got, double ref) {
            return std::fabs(got - ref) > 1e-12 * std::fabs(ref);
        };
        if (bad(core.x0, x0_ref) || bad(core.f_at_x0, f_ref) || bad(core.f2_at_x0, f2_ref) ||
            bad(core.g_at_x0, g_ref)) {
            pass = false;
            why = "symmetric closed forms diverge beyond 1e-12";
        }
    }

    // asymmetric critical point vs an independent 1-D minimizer
    double worst = 0.0;
    for (int k = 0; k < 100 && pass; ++k) {
        const dnak_double_nakagami_params p{{0.5 + unif(0.0, 5.0), unif(0.2, 4.0), 1.0},
                                            {0.5 + unif(0.0, 5.0), unif(0.2, 4.0), 1.0}};
        const double z = unif(0.05, 4.0);
        dnak_laplace_core core{};
        must(dnak_double_laplace_core(&p, z, &core), "core");
        const long double mx = p.x_branch.m, ox = p.x_branch.omega;
        const long double my = p.y_branch.m, oy = p.y_branch.omega;
        const long double zz = z;
        const double x_min = brute::min_on_positive_axis([&](long double x) {
            return mx * x * x / ox + my * zz * zz / (oy * x * x) -
                   2.0L * (mx - my) * std::log(x);
        });
        worst = std::max(worst, std::fabs(core.x0 - x_min) / std::max(1.0, core.x0));
    }
    if (pass && worst > 1e-8) {
        pass = false;
        why = "critical point diverges from minimizer oracle";
    }

    std::ostringstream d;
    d << "critical-point algebra: symmetric closed forms to 1e-12, 100 random cases vs "
      << "minimizer oracle to 1e-8 (worst " << fmt(worst) << ")";
    if (!pass) d << " - " << why;
    rep.line(6, pass, d.str(), t.seconds());
}

void criterion_normalization_collapse(Reporter& rep) {
    Timer t;
    const double scales[3] = {0.1, 1.0, 10.0};
    const double base_db[5] = {-20.0, -10.0, 0.0, 5.0, 10.0};
    const dnak_double_nakagami_params base{{2.0, 1.0, 1.0}, {1.5, 1.0, 1.0}};

    double worst = 0.0;
    for (double db : base_db) {
        const double unit = (base.x_branch.omega / base.x_branch.m) *
                            (base.y_branch.omega / base.y_branch.m);
        const double z = std::sqrt(std::pow(10.0, db / 10.0) * unit);
        double n_base = 0.0;
        must(dnak_double_lcr_exact(&base, z, nullptr, &n_base), "lcr");
        const double curve_base = n_base / base.x_branch.doppler_hz;

        for (double a : scales)
            for (double b : scales)
                for (double c : scales) {
                    dnak_double_nakagami_params p = base;
                    p.x_branch.omega *= a;
                    p.y_branch.omega *= b;
                    p.x_branch.doppler_hz *= c;
                    p.y_branch.doppler_hz *= c;
                    double n = 0.0;
                    must(dnak_double_lcr_exact(&p, z * std::sqrt(a * b), nullptr, &n), "lcr");
                    const double curve = n / p.x_branch.doppler_hz;
                    worst = std::max(worst, std::fabs(curve - curve_base) /
                                                std::fabs(curve_base));
                }
    }
    std::ostringstream d;
    d << "normalized LCR curve invariant under power/Doppler rescaling to 1e-8; worst "
      << fmt(worst);
    rep.line(7, worst <= 1e-8, d.str(), t.seconds());
}

void criterion_degenerate_limits(Reporter& rep) {
    Timer t;
    bool pass = true;
    std::ostringstream d;

    // static Y branch: the rate stays finite and matches the nested-integral
    // form evaluated with sigma_ydot = 0
    {
        const dnak_double_nakagami_params p{{2.0, 1.0, 1.3}, {1.5, 0.8, 0.0}};
        const double z = 0.9;
        double n = 0.0;
        must(dnak_double_lcr_exact(&p, z, nullptr, &n), "lcr");
        double sx = 0.0;
        must(dnak_nakagami_derivative_std(&p.x_branch, &sx), "sigma");
        const double ref = brute::rice_lcr_2d(2.0, 1.0, 1.5, 0.8, sx, 0.0, z);
        const double rel = std::fabs(n - ref) / ref;
        if (!(n > 0.0) || !std::isfinite(n) || rel > 1e-6) {
            pass = false;
            d << "static-Y limit diverges (rel " << fmt(rel) << "); ";
        }
    }

    // severe X concentration approaches the single-envelope rate
    {
        const dnak_double_nakagami_params p{{200.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
        const double z = 0.8;
        double n = 0.0, single = 0.0;
        must(dnak_double_lcr_exact(&p, z, nullptr, &n), "lcr");
        const dnak_nakagami_params y{1.0, 1.0, 1.0};
        must(dnak_nakagami_single_envelope_lcr(&y, z / std::sqrt(p.x_branch.omega), &single),
             "single");
        const double rel = std::fabs(n - single) / single;
        if (rel > 0.01) {
            pass = false;
            d << "m_x=200 concentration off by " << fmt(rel) << "; ";
        }
    }

    d << "static-Y limit matches nested-integral form to 1e-6; m_x=200 rate within 1% of "
         "the single-envelope rate";
    rep.line(8, pass, d.str(), t.seconds());
}

void criterion_estimator_identities(Reporter& rep) {
    Timer t;
    bool pass = true;
    std::ostringstream d;

    dnak_rng* rng = dnak_rng_create(424242, 0);
    for (int k = 0; k < 5 && pass; ++k) {
        const dnak_nakagami_params p{1.0, 0.5 + 0.5 * k, 2.0};
        const dnak_doppler_spec spec{2.0, 16, 64.0};
        dnak_rng* sub = dnak_rng_fork(rng, static_cast<std::uint64_t>(k));
        dnak_trace* trace = nullptr;
        must(dnak_gen_nakagami_trace(&p, &spec, 20000, sub, &trace), "trace");
        const double thresholds[3] = {0.4 * std::sqrt(p.omega), std::sqrt(p.omega),
                                      1.4 * std::sqrt(p.omega)};
        for (double level : thresholds) {
            dnak_crossing_stats st{};
            must(dnak_trace_crossing_stats(trace, level, &st), "stats");
            const double lhs = st.afd_s * st.lcr_hz;
            const double rhs = st.time_below_s / st.duration_s;
            if (std::fabs(lhs - rhs) > 4e-16 * std::max(std::fabs(rhs), 1.0)) {
                pass = false;
                d << "afd*lcr identity broken at level " << fmt(level) << "; ";
            }
            const double ci = 1.96 * std::sqrt(static_cast<double>(st.down_crossings)) /
                              st.duration_s;
            if (st.lcr_ci_halfwidth_hz != ci) {
                pass = false;
                d << "confidence half-width formula mismatch; ";
            }
        }
        dnak_trace_destroy(trace);
        dnak_rng_destroy(sub);
    }
    dnak_rng_destroy(rng);

    // byte-exact CSV under a fixed seed
    {
        SweepRequest req;
        req.mode = SweepMode::keyhole;
        req.kh = reference_config(1, 1, 5.0);
        req.grid_min_db = -10.0;
        req.grid_max_db = 5.0;
        req.grid_points = 5;
        req.methods = kMethodExact | kMethodMonteCarlo;
        req.mc_duration_symbols = 200000;
        req.mc_seed = 7;
        const std::string a = run_sweep(req);
        const std::string b = run_sweep(req);
        if (a != b) {
            pass = false;
            d << "CSV not byte-identical across reruns; ";
        }
    }

    d << "afd*lcr = time_below/duration on random traces; fixed-seed CSV byte-identical";
    rep.line(9, pass, d.str(), t.seconds());
}

} // namespace

int run_acceptance(std::ostream& out) {
    Reporter rep{out};
    out << "dnak " << dnak_version() << " validation suite\n";
    criterion_lcr_approximation(rep);
    criterion_afd_approximation(rep);
    criterion_monte_carlo(rep);
    criterion_rice_brute_force(rep);
    criterion_cdf_fixture(rep);
    criterion_laplace_core(rep);
    criterion_normalization_collapse(rep);
    criterion_degenerate_limits(rep);
    criterion_estimator_identities(rep);
    out << (rep.failures == 0 ? "all criteria passed\n"
                              : std::to_string(rep.failures) + " criteria failed\n");
    return rep.failures;
}

} // namespace dnak_cli
