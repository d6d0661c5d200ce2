#include "double_nakagami.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace dnak {

void DoubleNakagamiParams::validate() const {
    x_branch.validate();
    y_branch.validate();
}

namespace double_nakagami {

namespace {

constexpr double kHalfLog2Pi = 0.918938533204672741780329736406;
constexpr double kLog4 = 2.0 * std::numbers::ln2;

struct Kernel {
    double m_x, omega_x, m_y, omega_y;
    double sigma_x, sigma_y; // envelope-derivative std deviations
    double z;

    double x0() const {
        const double d = m_x - m_y;
        const double a = omega_x * omega_y * d;
        const double b = 2.0 * z * std::sqrt(m_x * m_y * omega_x * omega_y);
        const double disc = std::hypot(a, b);
        // conjugate form for d < 0, where a + disc cancels catastrophically
        const double x2 = a >= 0.0 ? (a + disc) / (2.0 * m_x * omega_y)
                                   : b * b / ((disc - a) * 2.0 * m_x * omega_y);
        return std::sqrt(x2);
    }

    // exponent of the crossing-rate integrand: m_x x^2/omega_x
    //   + m_y z^2/(omega_y x^2) - 2 (m_x - m_y) ln x
    // Ratios are formed as (z/x)^2 and (z/x^2)^2 so that thresholds near the
    // underflow edge do not lose z^2 or x^4 to intermediate underflow.
    double f(double x) const {
        const double zx = z / x;
        return m_x * x * x / omega_x + m_y * zx * zx / omega_y -
               2.0 * (m_x - m_y) * std::log(x);
    }

    double f_prime(double x) const {
        const double u = z / (x * x);
        return 2.0 * m_x * x / omega_x - 2.0 * m_y * u * u * x / omega_y -
               2.0 * (m_x - m_y) / x;
    }

    double f_second(double x) const {
        const double u = z / (x * x);
        return 2.0 * m_x / omega_x + 6.0 * m_y * u * u / omega_y +
               2.0 * (m_x - m_y) / (x * x);
    }

    // log of the shared prefactor of the exact rate, without sigma_y
    double ln_prefactor() const {
        return kLog4 + (2.0 * m_y - 1.0) * std::log(z) -
               numerics::ln_gamma(m_x) - numerics::ln_gamma(m_y) +
               m_x * std::log(m_x / omega_x) + m_y * std::log(m_y / omega_y);
    }
};

Kernel make_kernel(const DoubleNakagamiParams& p, double z) {
    return Kernel{p.x_branch.m, p.x_branch.omega, p.y_branch.m, p.y_branch.omega,
                  nakagami::derivative_std(p.x_branch),
                  nakagami::derivative_std(p.y_branch), z};
}

} // namespace

double lcr_exact(const DoubleNakagamiParams& p, double z,
                 const numerics::QuadratureSpec& spec) {
    p.validate();
    spec.validate();
    if (!std::isfinite(z) || z <= 0.0)
        throw DomainError("lcr_exact: threshold z must be positive");
    if (p.x_branch.doppler_hz == 0.0 && p.y_branch.doppler_hz == 0.0)
        throw DomainError("lcr_exact: at least one branch Doppler shift must be positive");

    const Kernel k = make_kernel(p, z);
    const double x0 = k.x0();
    const double f0 = k.f(x0);

    // The peak value e^{-f(x0)} is factored out so the integrand stays O(1)
    // even for severity parameters in the hundreds.
    auto integrand = [&k, f0](double x) {
        const double e = -(k.f(x) - f0);
        if (e < -745.0) return 0.0;
        const double q = k.z / (x * x) * k.sigma_x;
        return std::hypot(k.sigma_y, q) * std::exp(e);
    };

    const numerics::QuadResult r = numerics::integrate_semiinfinite(integrand, spec);
    if (!(r.value > 0.0)) return 0.0;
    const double ln_n = k.ln_prefactor() - kHalfLog2Pi - f0 + std::log(r.value);
    const double n = std::exp(ln_n);
    return n < 1e-300 ? 0.0 : n;
}

double cdf(const DoubleNakagamiParams& p, double z,
           const numerics::QuadratureSpec& spec) {
    p.validate();
    spec.validate();
    if (!std::isfinite(z) || z < 0.0)
        throw DomainError("cdf: threshold z must be nonnegative");
    if (z == 0.0) return 0.0;

    const double m_y = p.y_branch.m;
    const double c_y = m_y * z * z / p.y_branch.omega;
    auto integrand = [&p, m_y, c_y](double x) {
        const double fx = nakagami::pdf(p.x_branch, x);
        if (fx == 0.0) return 0.0;
        return fx * numerics::reg_lower_gamma(m_y, c_y / (x * x));
    };
    const numerics::QuadResult r = numerics::integrate_semiinfinite(integrand, spec);
    return std::clamp(r.value, 0.0, 1.0);
}

double afd_exact(const DoubleNakagamiParams& p, double z,
                 const numerics::QuadratureSpec& spec) {
    const double n = lcr_exact(p, z, spec);
    if (n == 0.0)
        throw DomainError("afd_exact: crossing rate underflows to zero at this threshold");
    return cdf(p, z, spec) / n;
}

LaplaceCore laplace_core(const DoubleNakagamiParams& p, double z) {
    p.validate();
    if (!std::isfinite(z) || z <= 0.0)
        throw DomainError("laplace_core: threshold z must be positive");
    const Kernel k = make_kernel(p, z);
    if (k.sigma_y == 0.0)
        throw DomainError("laplace_core: requires a nonzero Y-branch Doppler shift");

    const double x0 = k.x0();
    // stationarity self-check, relative to the magnitude of the slope terms
    const double scale = 2.0 * k.m_x * x0 / k.omega_x +
                         2.0 * k.m_y * z * z / (k.omega_y * x0 * x0 * x0) +
                         2.0 * std::fabs(k.m_x - k.m_y) / x0;
    if (std::fabs(k.f_prime(x0)) > 1e-9 * scale)
        throw ConsistencyError("laplace_core: critical point fails the stationarity check");

    const double ratio = z / (x0 * x0) * (k.sigma_x / k.sigma_y);
    const double g0 = std::hypot(1.0, ratio);
    return LaplaceCore{x0, k.f(x0), k.f_second(x0), g0};
}

double lcr_laplace(const DoubleNakagamiParams& p, double z) {
    p.validate();
    if (!std::isfinite(z) || z <= 0.0)
        throw DomainError("lcr_laplace: threshold z must be positive");
    if (p.y_branch.doppler_hz == 0.0) {
        if (p.x_branch.doppler_hz == 0.0)
            throw DomainError("lcr_laplace: at least one branch Doppler shift must be positive");
        return lcr_laplace(DoubleNakagamiParams{p.y_branch, p.x_branch}, z);
    }

    const Kernel k = make_kernel(p, z);
    const LaplaceCore core = laplace_core(p, z);
    const double ln_n = k.ln_prefactor() + std::log(k.sigma_y) + std::log(core.g_at_x0) -
                        0.5 * std::log(core.f2_at_x0) - core.f_at_x0;
    const double n = std::exp(ln_n);
    return n < 1e-300 ? 0.0 : n;
}

double afd_laplace(const DoubleNakagamiParams& p, double z,
                   const numerics::QuadratureSpec& spec) {
    const double n = lcr_laplace(p, z);
    if (n == 0.0)
        throw DomainError("afd_laplace: crossing rate underflows to zero at this threshold");
    return cdf(p, z, spec) / n;
}

} // namespace double_nakagami
} // namespace dnak
