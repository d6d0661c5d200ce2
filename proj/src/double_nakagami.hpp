#ifndef DNAK_DOUBLE_NAKAGAMI_HPP
#define DNAK_DOUBLE_NAKAGAMI_HPP

#include "nakagami.hpp"
#include "numerics.hpp"

namespace dnak {

/// The product process Z(t) = X(t) Y(t) of two independent Nakagami-m
/// envelopes.
struct DoubleNakagamiParams {
    NakagamiParams x_branch;
    NakagamiParams y_branch;

    void validate() const;
};

/// Evaluation of the approximation kernel at the critical point x0:
/// the exponent f, its second derivative, and the slowly varying factor g.
struct LaplaceCore {
    double x0;
    double f_at_x0;
    double f2_at_x0;
    double g_at_x0;
};

namespace double_nakagami {

/// Exact level crossing rate of Z at threshold z > 0 (crossings per second).
/// The derivative-scale radical is kept inside the integrand, so a static
/// Y branch (sigma_ydot = 0) is handled directly. Requires at least one
/// branch with nonzero Doppler. Values below 1e-300 are reported as 0.
double lcr_exact(const DoubleNakagamiParams& p, double z,
                 const numerics::QuadratureSpec& spec = {});

/// Distribution F_Z(z), computed by conditioning on the X branch.
double cdf(const DoubleNakagamiParams& p, double z,
           const numerics::QuadratureSpec& spec = {});

/// Average fade duration F_Z(z) / N_Z(z) in seconds.
double afd_exact(const DoubleNakagamiParams& p, double z,
                 const numerics::QuadratureSpec& spec = {});

/// Critical point and kernel values backing the closed-form approximations.
/// Requires sigma_ydot > 0; a failing stationarity self-check throws
/// ConsistencyError.
LaplaceCore laplace_core(const DoubleNakagamiParams& p, double z);

/// Closed-form approximate LCR. For a static Y branch the roles of X and Y
/// are swapped (Z is symmetric in its factors).
double lcr_laplace(const DoubleNakagamiParams& p, double z);

/// Closed-form approximate AFD: cdf / lcr_laplace.
double afd_laplace(const DoubleNakagamiParams& p, double z,
                   const numerics::QuadratureSpec& spec = {});

} // namespace double_nakagami
} // namespace dnak

#endif
