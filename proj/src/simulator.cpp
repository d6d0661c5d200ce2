#include "simulator.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "errors.hpp"

namespace dnak {

void DopplerSpec::validate() const {
    if (!std::isfinite(max_doppler_hz) || max_doppler_hz <= 0.0)
        throw ConfigError("DopplerSpec: max_doppler_hz must be positive");
    if (oscillators < 8)
        throw ConfigError("DopplerSpec: need at least 8 oscillators");
    if (!std::isfinite(sample_rate_hz) || sample_rate_hz < 16.0 * max_doppler_hz)
        throw ConfigError("DopplerSpec: sample_rate_hz must be >= 16 * max_doppler_hz");
}

namespace sim {

namespace {

constexpr double kPi = std::numbers::pi;

int gaussian_count(double m, const char* what) {
    const double two_m = 2.0 * m;
    const double rounded = std::round(two_m);
    if (std::fabs(two_m - rounded) > 1e-9 || rounded < 1.0)
        throw ConfigError(std::string(what) + ": simulation requires 2m to be a positive integer");
    return static_cast<int>(rounded);
}

// Adds the square of one unit-variance Jakes-spectrum Gaussian process to acc.
//
// Arrival angles are equally spaced over [0, pi) with one random rotation, so
// the realized derivative variance matches the isotropic-scattering value
// exactly (sum of cos^2 over the strata is K/2); the per-oscillator phases
// are independent. Oscillators advance by complex phasor rotation, one
// complex multiply per oscillator per sample.
void accumulate_squared_gaussian(std::vector<double>& acc, const DopplerSpec& d,
                                 RandomStream& rng) {
    const int k_osc = d.oscillators;
    const double dt = 1.0 / d.sample_rate_hz;

    std::vector<double> re(k_osc), im(k_osc), rot_re(k_osc), rot_im(k_osc);
    const double rot_frac = rng.uniform();
    for (int k = 0; k < k_osc; ++k) {
        const double angle = kPi * (static_cast<double>(k) + rot_frac) / k_osc;
        const double step = 2.0 * kPi * d.max_doppler_hz * std::cos(angle) * dt;
        const double phase = 2.0 * kPi * rng.uniform();
        re[k] = std::cos(phase);
        im[k] = std::sin(phase);
        rot_re[k] = std::cos(step);
        rot_im[k] = std::sin(step);
    }

    const double amp = std::sqrt(2.0 / k_osc);
    const std::size_t n = acc.size();
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = 0; k < k_osc; ++k) {
            s += re[k];
            const double nr = re[k] * rot_re[k] - im[k] * rot_im[k];
            im[k] = re[k] * rot_im[k] + im[k] * rot_re[k];
            re[k] = nr;
        }
        const double g = amp * s;
        acc[i] += g * g;
    }
}

void check_trace_request(const DopplerSpec& d, double doppler_hz, std::size_t n) {
    d.validate();
    if (d.max_doppler_hz != doppler_hz)
        throw ConfigError("trace generation: DopplerSpec.max_doppler_hz must equal the "
                          "branch doppler_hz");
    if (n < 2)
        throw ConfigError("trace generation: need at least 2 samples");
}

} // namespace

EnvelopeTrace gen_nakagami_trace(const NakagamiParams& p, const DopplerSpec& d,
                                 std::size_t n_samples, RandomStream& rng) {
    p.validate();
    check_trace_request(d, p.doppler_hz, n_samples);
    const int n_gauss = gaussian_count(p.m, "gen_nakagami_trace");

    std::vector<double> acc(n_samples, 0.0);
    for (int l = 0; l < n_gauss; ++l)
        accumulate_squared_gaussian(acc, d, rng);

    const double scale = p.omega / n_gauss;
    for (double& v : acc)
        v = std::sqrt(v * scale);
    return EnvelopeTrace{std::move(acc), d.sample_rate_hz};
}

EnvelopeTrace product_trace(const EnvelopeTrace& x, const EnvelopeTrace& y) {
    if (x.samples.size() != y.samples.size())
        throw ConfigError("product_trace: traces have different lengths");
    if (x.sample_rate_hz != y.sample_rate_hz)
        throw ConfigError("product_trace: traces have different sample rates");
    EnvelopeTrace out{std::vector<double>(x.samples.size()), x.sample_rate_hz};
    for (std::size_t i = 0; i < x.samples.size(); ++i)
        out.samples[i] = x.samples[i] * y.samples[i];
    return out;
}

EnvelopeTrace keyhole_snr_trace(const KeyholeConfig& cfg, const DopplerSpec& d_alpha,
                                const DopplerSpec& d_beta, std::size_t n_samples,
                                RandomStream& rng) {
    cfg.validate();
    check_trace_request(d_alpha, cfg.doppler_tx_hz, n_samples);
    check_trace_request(d_beta, cfg.doppler_rx_hz, n_samples);
    if (d_alpha.sample_rate_hz != d_beta.sample_rate_hz)
        throw ConfigError("keyhole_snr_trace: both sides must share one sample rate");
    const int n_gauss_tx = gaussian_count(cfg.m_tx, "keyhole_snr_trace (m_tx)");
    const int n_gauss_rx = gaussian_count(cfg.m_rx, "keyhole_snr_trace (m_rx)");
    const int m = cfg.tx_antennas;
    const int n = cfg.rx_antennas;

    std::vector<double> sum_tx(n_samples, 0.0), sum_rx(n_samples, 0.0);
    for (int i = 0; i < m; ++i) {
        RandomStream path_rng = rng.fork(static_cast<std::uint64_t>(i));
        for (int l = 0; l < n_gauss_tx; ++l)
            accumulate_squared_gaussian(sum_tx, d_alpha, path_rng);
    }
    for (int j = 0; j < n; ++j) {
        RandomStream path_rng = rng.fork(static_cast<std::uint64_t>(m + j));
        for (int l = 0; l < n_gauss_rx; ++l)
            accumulate_squared_gaussian(sum_rx, d_beta, path_rng);
    }

    // sum_i alpha_i^2 = (Omega_T / 2 m_T) * (accumulated Gaussian squares)
    const double tx_scale = cfg.omega_tx / n_gauss_tx;
    const double rx_scale = cfg.omega_rx / n_gauss_rx;
    const double snr_scale = cfg.avg_snr / (m * cfg.stbc_rate);

    EnvelopeTrace out{std::vector<double>(n_samples), d_alpha.sample_rate_hz};
    for (std::size_t i = 0; i < n_samples; ++i)
        out.samples[i] = snr_scale * (tx_scale * sum_tx[i]) * (rx_scale * sum_rx[i]);
    return out;
}

CrossingStats crossing_stats(const EnvelopeTrace& trace, double threshold) {
    if (trace.samples.size() < 2)
        throw ConfigError("crossing_stats: trace must hold at least 2 samples");
    if (!(trace.sample_rate_hz > 0.0) || !std::isfinite(trace.sample_rate_hz))
        throw ConfigError("crossing_stats: invalid sample rate");
    if (!std::isfinite(threshold) || threshold <= 0.0)
        throw DomainError("crossing_stats: threshold must be positive");

    const std::vector<double>& s = trace.samples;
    const std::size_t n = s.size();
    std::uint64_t crossings = 0;
    std::uint64_t below = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (s[k] >= threshold && s[k + 1] < threshold) ++crossings;
        if (s[k] < threshold) ++below;
    }

    const double dt = 1.0 / trace.sample_rate_hz;
    const double duration = static_cast<double>(n - 1) * dt;
    const double time_below = static_cast<double>(below) * dt;
    const double lcr = static_cast<double>(crossings) / duration;
    const double afd = time_below / static_cast<double>(std::max<std::uint64_t>(crossings, 1));
    const double ci = 1.96 * std::sqrt(static_cast<double>(crossings)) / duration;
    return CrossingStats{threshold, crossings, duration, time_below, lcr, afd, ci};
}

namespace {
constexpr char kMagic[4] = {'F', 'D', 'S', 'T'};
constexpr std::uint32_t kVersion = 1;
} // namespace

void write_trace(const EnvelopeTrace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("write_trace: cannot open " + path);
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&kVersion), sizeof(kVersion));
    out.write(reinterpret_cast<const char*>(&trace.sample_rate_hz), sizeof(double));
    out.write(reinterpret_cast<const char*>(trace.samples.data()),
              static_cast<std::streamsize>(trace.samples.size() * sizeof(double)));
    if (!out)
        throw IoError("write_trace: short write to " + path);
}

EnvelopeTrace read_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in)
        throw IoError("read_trace: cannot open " + path);
    const std::streamoff size = in.tellg();
    if (size < 16 || (size - 16) % 8 != 0)
        throw IoError("read_trace: malformed trace file " + path);
    in.seekg(0);

    char magic[4];
    std::uint32_t version = 0;
    EnvelopeTrace trace;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    in.read(reinterpret_cast<char*>(&trace.sample_rate_hz), sizeof(double));
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("read_trace: bad magic in " + path);
    if (version != kVersion)
        throw IoError("read_trace: unsupported trace version in " + path);

    const std::size_t n = static_cast<std::size_t>((size - 16) / 8);
    trace.samples.resize(n);
    in.read(reinterpret_cast<char*>(trace.samples.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    if (!in || n < 2)
        throw IoError("read_trace: truncated trace file " + path);
    return trace;
}

} // namespace sim
} // namespace dnak
