#ifndef DNAK_SIMULATOR_HPP
#define DNAK_SIMULATOR_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "keyhole.hpp"
#include "nakagami.hpp"
#include "rng.hpp"

namespace dnak {

/// Sum-of-sinusoids synthesis parameters for one Doppler-faded branch.
struct DopplerSpec {
    double max_doppler_hz;
    int oscillators = 32;
    double sample_rate_hz;

    void validate() const; // sample_rate >= 16 f_d, oscillators >= 8
};

/// Uniformly sampled nonnegative realization of a random process.
struct EnvelopeTrace {
    std::vector<double> samples;
    double sample_rate_hz;
};

/// Empirical down-crossing statistics of a trace at one threshold.
struct CrossingStats {
    double threshold;
    std::uint64_t down_crossings;
    double duration_s;
    double time_below_s;
    double lcr_hz;            // down_crossings / duration
    double afd_s;             // time_below / max(down_crossings, 1)
    double lcr_ci_halfwidth_hz; // Poisson 95% half-width, 1.96 sqrt(count)/duration
};

namespace sim {

/// Time-correlated Nakagami-m envelope with Jakes/Clarke Doppler spectrum,
/// built as the root sum of 2m squared unit Gaussian processes. Requires
/// 2m integer and d.max_doppler_hz == p.doppler_hz.
EnvelopeTrace gen_nakagami_trace(const NakagamiParams& p, const DopplerSpec& d,
                                 std::size_t n_samples, RandomStream& rng);

/// Pointwise product of two traces with equal rates and lengths.
EnvelopeTrace product_trace(const EnvelopeTrace& x, const EnvelopeTrace& y);

/// Instantaneous output SNR trace of the STBC keyhole channel:
/// gamma(t) = avg_snr/(M R) (sum_i alpha_i^2)(sum_j beta_j^2).
/// Antenna path i draws from rng.fork(i); receive path j from rng.fork(M+j).
EnvelopeTrace keyhole_snr_trace(const KeyholeConfig& cfg, const DopplerSpec& d_alpha,
                                const DopplerSpec& d_beta, std::size_t n_samples,
                                RandomStream& rng);

/// Down-crossings are counted where trace[k] >= threshold and
/// trace[k+1] < threshold; time below uses the left-endpoint rule over the
/// n-1 sample intervals, so time_below <= duration always holds.
CrossingStats crossing_stats(const EnvelopeTrace& trace, double threshold);

/// Binary trace file: 16-byte header (magic "FDST", u32 version = 1,
/// f64 sample rate), then the samples as little-endian 64-bit floats.
void write_trace(const EnvelopeTrace& trace, const std::string& path);
EnvelopeTrace read_trace(const std::string& path);

} // namespace sim
} // namespace dnak

#endif
