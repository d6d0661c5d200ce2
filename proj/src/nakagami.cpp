#include "nakagami.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "numerics.hpp"

namespace dnak {

void NakagamiParams::validate() const {
    if (!std::isfinite(m) || m < 0.5)
        throw DomainError("NakagamiParams: m must be >= 0.5");
    if (!std::isfinite(omega) || omega <= 0.0)
        throw DomainError("NakagamiParams: omega must be positive");
    if (!std::isfinite(doppler_hz) || doppler_hz < 0.0)
        throw DomainError("NakagamiParams: doppler_hz must be nonnegative");
}

namespace nakagami {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kLog2 = std::numbers::ln2;
constexpr double kHalfLog2Pi = 0.918938533204672741780329736406;
} // namespace

double pdf(const NakagamiParams& p, double x) {
    p.validate();
    if (!std::isfinite(x) || x < 0.0)
        throw DomainError("nakagami::pdf: x must be nonnegative");
    if (x == 0.0) {
        // x^{2m-1} vanishes for m > 0.5; at m = 0.5 the limit is finite
        if (p.m > 0.5) return 0.0;
        return std::sqrt(2.0 / (kPi * p.omega));
    }
    const double lf = p.m * std::log(p.m / p.omega) + kLog2 +
                      (2.0 * p.m - 1.0) * std::log(x) -
                      numerics::ln_gamma(p.m) - p.m * x * x / p.omega;
    return std::exp(lf);
}

double cdf(const NakagamiParams& p, double x) {
    p.validate();
    if (!std::isfinite(x) || x < 0.0)
        throw DomainError("nakagami::cdf: x must be nonnegative");
    if (x == 0.0) return 0.0;
    return numerics::reg_lower_gamma(p.m, p.m * x * x / p.omega);
}

double derivative_std(const NakagamiParams& p) {
    p.validate();
    return kPi * p.doppler_hz * std::sqrt(p.omega / p.m);
}

std::vector<double> sample(const NakagamiParams& p, RandomStream& rng, std::size_t n) {
    p.validate();
    if (n == 0)
        throw DomainError("nakagami::sample: n must be >= 1");
    const double scale = p.omega / p.m;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::sqrt(rng.gamma(p.m) * scale);
    return out;
}

double single_envelope_lcr(const NakagamiParams& p, double r) {
    p.validate();
    if (!std::isfinite(r) || r <= 0.0)
        throw DomainError("nakagami::single_envelope_lcr: level must be positive");
    if (p.doppler_hz == 0.0) return 0.0;
    const double r2 = r * r / p.omega;
    const double ln_n = kHalfLog2Pi + std::log(p.doppler_hz) +
                        (p.m - 0.5) * std::log(p.m) - numerics::ln_gamma(p.m) +
                        (p.m - 0.5) * std::log(r2) - p.m * r2;
    const double n = std::exp(ln_n);
    return n < 1e-300 ? 0.0 : n;
}

} // namespace nakagami
} // namespace dnak
