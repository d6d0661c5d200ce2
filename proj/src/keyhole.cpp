#include "keyhole.hpp"

#include <cmath>

#include "errors.hpp"

namespace dnak {

void KeyholeConfig::validate() const {
    if (tx_antennas < 1 || rx_antennas < 1)
        throw DomainError("KeyholeConfig: antenna counts must be >= 1");
    if (!std::isfinite(m_tx) || m_tx < 0.5 || !std::isfinite(m_rx) || m_rx < 0.5)
        throw DomainError("KeyholeConfig: m_tx and m_rx must be >= 0.5");
    if (!std::isfinite(omega_tx) || omega_tx <= 0.0 || !std::isfinite(omega_rx) || omega_rx <= 0.0)
        throw DomainError("KeyholeConfig: omega_tx and omega_rx must be positive");
    if (!std::isfinite(doppler_tx_hz) || doppler_tx_hz < 0.0 ||
        !std::isfinite(doppler_rx_hz) || doppler_rx_hz < 0.0)
        throw DomainError("KeyholeConfig: Doppler shifts must be nonnegative");
    if (!std::isfinite(stbc_rate) || stbc_rate <= 0.0)
        throw DomainError("KeyholeConfig: stbc_rate must be positive");
    if (!std::isfinite(avg_snr) || avg_snr <= 0.0)
        throw DomainError("KeyholeConfig: avg_snr must be positive");
}

namespace keyhole {

DoubleNakagamiParams equivalent_double_nakagami(const KeyholeConfig& cfg) {
    cfg.validate();
    const double m = static_cast<double>(cfg.tx_antennas);
    const double n = static_cast<double>(cfg.rx_antennas);
    return DoubleNakagamiParams{
        NakagamiParams{m * cfg.m_tx, m * cfg.omega_tx, cfg.doppler_tx_hz},
        NakagamiParams{n * cfg.m_rx, n * cfg.omega_rx, cfg.doppler_rx_hz},
    };
}

namespace {
double mapped_threshold(const KeyholeConfig& cfg, double gamma) {
    if (!std::isfinite(gamma) || gamma <= 0.0)
        throw DomainError("keyhole: SNR threshold gamma must be positive");
    return std::sqrt(gamma * cfg.tx_antennas * cfg.stbc_rate / cfg.avg_snr);
}
} // namespace

double snr_lcr(const KeyholeConfig& cfg, double gamma, Method method,
               const numerics::QuadratureSpec& spec) {
    cfg.validate();
    const DoubleNakagamiParams p = equivalent_double_nakagami(cfg);
    const double z = mapped_threshold(cfg, gamma);
    return method == Method::exact ? double_nakagami::lcr_exact(p, z, spec)
                                   : double_nakagami::lcr_laplace(p, z);
}

double snr_aod(const KeyholeConfig& cfg, double gamma, Method method,
               const numerics::QuadratureSpec& spec) {
    cfg.validate();
    const DoubleNakagamiParams p = equivalent_double_nakagami(cfg);
    const double z = mapped_threshold(cfg, gamma);
    return method == Method::exact ? double_nakagami::afd_exact(p, z, spec)
                                   : double_nakagami::afd_laplace(p, z, spec);
}

double normalized_threshold_db(const KeyholeConfig& cfg, double gamma) {
    cfg.validate();
    if (!std::isfinite(gamma) || gamma <= 0.0)
        throw DomainError("normalized_threshold_db: gamma must be positive");
    const double ratio = gamma * cfg.tx_antennas * cfg.stbc_rate /
                         (cfg.avg_snr * (cfg.omega_tx / cfg.m_tx) * (cfg.omega_rx / cfg.m_rx));
    return 10.0 * std::log10(ratio);
}

double threshold_from_normalized_db(const KeyholeConfig& cfg, double norm_db) {
    cfg.validate();
    if (!std::isfinite(norm_db))
        throw DomainError("threshold_from_normalized_db: norm_db must be finite");
    return std::pow(10.0, norm_db / 10.0) *
           cfg.avg_snr * (cfg.omega_tx / cfg.m_tx) * (cfg.omega_rx / cfg.m_rx) /
           (cfg.tx_antennas * cfg.stbc_rate);
}

} // namespace keyhole
} // namespace dnak
