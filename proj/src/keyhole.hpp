#ifndef DNAK_KEYHOLE_HPP
#define DNAK_KEYHOLE_HPP

#include "double_nakagami.hpp"

namespace dnak {

/// STBC MIMO keyhole channel: M transmit and N receive antennas, i.i.d.
/// Nakagami hops with per-hop severity/power on each side, the two maximum
/// Doppler shifts, the code rate, and the average SNR per receive antenna.
struct KeyholeConfig {
    int tx_antennas;
    int rx_antennas;
    double m_tx;
    double m_rx;
    double omega_tx;
    double omega_rx;
    double doppler_tx_hz;
    double doppler_rx_hz;
    double stbc_rate;
    double avg_snr;

    void validate() const;
};

enum class Method { exact, laplace };

namespace keyhole {

/// Product-process parameters of the combined channel: m_X = M m_T,
/// Omega_X = M Omega_T (and likewise for the receive side). The branch
/// Doppler fields equal the per-hop shifts, which reproduces the per-hop
/// derivative variance because Omega_X / m_X = Omega_T / m_T.
DoubleNakagamiParams equivalent_double_nakagami(const KeyholeConfig& cfg);

/// LCR of the instantaneous output SNR at threshold gamma:
/// the product-process rate at z = sqrt(gamma M R / avg_snr).
double snr_lcr(const KeyholeConfig& cfg, double gamma, Method method,
               const numerics::QuadratureSpec& spec = {});

/// Average outage duration of the output SNR at threshold gamma.
double snr_aod(const KeyholeConfig& cfg, double gamma, Method method,
               const numerics::QuadratureSpec& spec = {});

/// 10 log10( gamma M R / (avg_snr (Omega_T/m_T)(Omega_R/m_R)) ).
double normalized_threshold_db(const KeyholeConfig& cfg, double gamma);

/// Inverse of normalized_threshold_db.
double threshold_from_normalized_db(const KeyholeConfig& cfg, double norm_db);

} // namespace keyhole
} // namespace dnak

#endif
