#ifndef DNAK_NAKAGAMI_HPP
#define DNAK_NAKAGAMI_HPP

#include <cstddef>
#include <vector>

#include "rng.hpp"

namespace dnak {

/// One Nakagami-m envelope: severity m >= 0.5, mean square power
/// omega = E[X^2] > 0, and the maximum Doppler shift in Hz (0 = static).
struct NakagamiParams {
    double m;
    double omega;
    double doppler_hz;

    void validate() const; // throws DomainError
};

namespace nakagami {

/// Envelope density (m/omega)^m 2 x^{2m-1} / Gamma(m) exp(-m x^2 / omega).
/// At x = 0 with m = 0.5 the removable limit sqrt(2/(pi omega)) is returned.
double pdf(const NakagamiParams& p, double x);

/// Envelope distribution P(m, m x^2 / omega).
double cdf(const NakagamiParams& p, double x);

/// Standard deviation of the envelope time derivative,
/// sigma = pi f_d sqrt(omega / m).
double derivative_std(const NakagamiParams& p);

/// n i.i.d. static draws, via gamma sampling of the squared envelope.
std::vector<double> sample(const NakagamiParams& p, RandomStream& rng, std::size_t n);

/// Closed-form level crossing rate of a single Nakagami envelope at level r.
/// Returns 0 for a static terminal (f_d = 0) and for deeply underflowing
/// levels.
double single_envelope_lcr(const NakagamiParams& p, double r);

} // namespace nakagami
} // namespace dnak

#endif
