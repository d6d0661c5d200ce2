#ifndef DNAK_TOOLS_BRUTE_FORCE_HPP
#define DNAK_TOOLS_BRUTE_FORCE_HPP

// Reference implementations used only for verification. They are kept
// deliberately independent of the library under test: plain fixed-grid
// composite rules, std::lgamma for the gamma function, and long double
// arithmetic for the 1-D minimizer.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace brute {

inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += f(a + i * h) * ((i & 1) ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline double riemann_midpoint(const std::function<double(double)>& f, double a, double b,
                               long n) {
    const double h = (b - a) / static_cast<double>(n);
    double s = 0.0;
    for (long i = 0; i < n; ++i)
        s += f(a + (static_cast<double>(i) + 0.5) * h);
    return s * h;
}

inline double nakagami_pdf_ref(double m, double omega, double x) {
    if (x <= 0.0) return 0.0;
    const double lf = m * std::log(m / omega) + std::log(2.0) +
                      (2.0 * m - 1.0) * std::log(x) - std::lgamma(m) - m * x * x / omega;
    return lf < -745.0 ? 0.0 : std::exp(lf);
}

// Down-crossing rate of Z = XY at level z, evaluated as the nested pair of
// integrals: the inner expected positive slope over the conditional Gaussian
// slope density (computed numerically), the outer over the conditioning
// envelope value x mapped onto (0, 1).
inline double rice_lcr_2d(double m_x, double omega_x, double m_y, double omega_y,
                          double sigma_x, double sigma_y, double z,
                          int n_outer = 20000, int n_inner = 1000) {
    auto outer = [&](double t) -> double {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        const double x = t / (1.0 - t);
        const double f_x = nakagami_pdf_ref(m_x, omega_x, x);
        if (f_x == 0.0) return 0.0;
        const double f_z_given_x = nakagami_pdf_ref(m_y, omega_y, z / x) / x;
        if (f_z_given_x == 0.0) return 0.0;
        const double s2 = z * z * sigma_x * sigma_x / (x * x) + x * x * sigma_y * sigma_y;
        if (s2 <= 0.0) return 0.0;
        const double s = std::sqrt(s2);
        auto up_slope = [s2, s](double zd) {
            return zd * std::exp(-zd * zd / (2.0 * s2)) / (std::sqrt(2.0 * M_PI) * s);
        };
        const double inner = simpson(up_slope, 0.0, 10.0 * s, n_inner);
        const double jac = 1.0 / ((1.0 - t) * (1.0 - t));
        return inner * f_z_given_x * f_x * jac;
    };
    return simpson(outer, 0.0, 1.0, n_outer);
}

// Golden-section minimizer over [a, b] in long double, so the attainable
// localization is well below 1e-8 even for shallow minima.
inline double golden_min(const std::function<long double(long double)>& f, long double a,
                         long double b, long double tol) {
    const long double gr = (std::sqrt(5.0L) - 1.0L) / 2.0L;
    long double c = b - gr * (b - a);
    long double d = a + gr * (b - a);
    long double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a); fd = f(d);
        }
    }
    return static_cast<double>(0.5L * (a + b));
}

// Locates the minimum of f over a wide log-spaced bracket, then refines.
inline double min_on_positive_axis(const std::function<long double(long double)>& f) {
    int best = 0;
    long double best_val = INFINITY;
    const int n = 600;
    for (int i = 0; i <= n; ++i) {
        const long double x = std::pow(10.0L, -6.0L + 12.0L * i / n);
        const long double v = f(x);
        if (v < best_val) { best_val = v; best = i; }
    }
    const long double lo = std::pow(10.0L, -6.0L + 12.0L * std::max(0, best - 1) / n);
    const long double hi = std::pow(10.0L, -6.0L + 12.0L * std::min(n, best + 1) / n);
    return golden_min(f, lo, hi, 1e-12L * hi);
}

inline double ks_distance(std::vector<double> samples,
                          const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    return d;
}

} // namespace brute

#endif
