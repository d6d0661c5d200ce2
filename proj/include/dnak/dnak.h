/*
 * dnak - second-order fading statistics of double Nakagami-m processes and
 * STBC MIMO keyhole channels: exact and closed-form approximate level
 * crossing rate (LCR) and average fade/outage duration (AFD/AOD), plus a
 * Monte Carlo envelope simulator for validation.
 *
 * Plain-C shared-library interface. Every function that can fail returns a
 * dnak_status; results go to out-parameters. Opaque handles own all state.
 * dnak_last_error() gives a human-readable message for the most recent
 * failure on the calling thread.
 */
#ifndef DNAK_H
#define DNAK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DNAK_API __declspec(dllexport)
#else
#define DNAK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dnak_status {
    DNAK_OK = 0,
    DNAK_ERROR_DOMAIN = 1,      /* argument outside its documented domain */
    DNAK_ERROR_CONVERGENCE = 2, /* quadrature exhausted its subdivisions */
    DNAK_ERROR_CONSISTENCY = 3, /* internal numerical self-check failed */
    DNAK_ERROR_CONFIG = 4,      /* invalid simulation configuration */
    DNAK_ERROR_IO = 5,          /* file read/write failure */
    DNAK_ERROR_NULL_ARGUMENT = 6,
    DNAK_ERROR_INTERNAL = 7
} dnak_status;

DNAK_API const char* dnak_version(void);
DNAK_API const char* dnak_status_name(dnak_status status);
/* Message for the last failing call on this thread; never NULL. */
DNAK_API const char* dnak_last_error(void);

/* ------------------------------------------------------------------ */
/* numerics                                                            */
/* ------------------------------------------------------------------ */

typedef struct dnak_quad_spec {
    double abs_tol;
    double rel_tol;
    int max_subdivisions;
} dnak_quad_spec;

/* abs_tol 1e-12, rel_tol 1e-10, 200 subdivisions */
DNAK_API void dnak_quad_spec_default(dnak_quad_spec* spec);

DNAK_API dnak_status dnak_ln_gamma(double a, double* out);
DNAK_API dnak_status dnak_reg_lower_gamma(double a, double u, double* out);

typedef double (*dnak_integrand_fn)(double x, void* user);

/* Integral of f over (0, inf). On DNAK_ERROR_CONVERGENCE the best estimate
 * and its error bound are still stored in *value and *err_estimate. */
DNAK_API dnak_status dnak_integrate_semiinfinite(dnak_integrand_fn f, void* user,
                                                 const dnak_quad_spec* spec,
                                                 double* value, double* err_estimate);

/* ------------------------------------------------------------------ */
/* single Nakagami-m envelope                                          */
/* ------------------------------------------------------------------ */

typedef struct dnak_nakagami_params {
    double m;          /* fading severity, >= 0.5 */
    double omega;      /* mean square power E[X^2], > 0 */
    double doppler_hz; /* maximum Doppler shift, >= 0 */
} dnak_nakagami_params;

DNAK_API dnak_status dnak_nakagami_pdf(const dnak_nakagami_params* p, double x, double* out);
DNAK_API dnak_status dnak_nakagami_cdf(const dnak_nakagami_params* p, double x, double* out);
DNAK_API dnak_status dnak_nakagami_derivative_std(const dnak_nakagami_params* p, double* out);
DNAK_API dnak_status dnak_nakagami_single_envelope_lcr(const dnak_nakagami_params* p,
                                                       double level, double* out);

/* ------------------------------------------------------------------ */
/* double Nakagami-m product process Z = X Y                           */
/* ------------------------------------------------------------------ */

typedef struct dnak_double_nakagami_params {
    dnak_nakagami_params x_branch;
    dnak_nakagami_params y_branch;
} dnak_double_nakagami_params;

/* Exact LCR (crossings/s) at threshold z > 0. Needs at least one branch
 * with a nonzero Doppler shift. A NULL spec selects the defaults. */
DNAK_API dnak_status dnak_double_lcr_exact(const dnak_double_nakagami_params* p, double z,
                                           const dnak_quad_spec* spec, double* out);
DNAK_API dnak_status dnak_double_cdf(const dnak_double_nakagami_params* p, double z,
                                     const dnak_quad_spec* spec, double* out);
DNAK_API dnak_status dnak_double_afd_exact(const dnak_double_nakagami_params* p, double z,
                                           const dnak_quad_spec* spec, double* out);

typedef struct dnak_laplace_core {
    double x0;       /* interior minimum of the exponent */
    double f_at_x0;
    double f2_at_x0; /* second derivative, > 0 */
    double g_at_x0;  /* slowly varying factor, >= 1 */
} dnak_laplace_core;

DNAK_API dnak_status dnak_double_laplace_core(const dnak_double_nakagami_params* p, double z,
                                              dnak_laplace_core* out);
DNAK_API dnak_status dnak_double_lcr_laplace(const dnak_double_nakagami_params* p, double z,
                                             double* out);
DNAK_API dnak_status dnak_double_afd_laplace(const dnak_double_nakagami_params* p, double z,
                                             const dnak_quad_spec* spec, double* out);

/* ------------------------------------------------------------------ */
/* STBC MIMO keyhole channel                                           */
/* ------------------------------------------------------------------ */

typedef struct dnak_keyhole_config {
    int tx_antennas;      /* M >= 1 */
    int rx_antennas;      /* N >= 1 */
    double m_tx;          /* per-hop severity, >= 0.5, equal across antennas */
    double m_rx;
    double omega_tx;      /* per-hop power, > 0 */
    double omega_rx;
    double doppler_tx_hz; /* f_alpha */
    double doppler_rx_hz; /* f_beta */
    double stbc_rate;     /* R > 0 */
    double avg_snr;       /* linear Es/N0, > 0 */
} dnak_keyhole_config;

typedef enum dnak_method {
    DNAK_METHOD_EXACT = 0,
    DNAK_METHOD_LAPLACE = 1
} dnak_method;

/* m_X = M m_T, Omega_X = M Omega_T (same pattern on the receive side). */
DNAK_API dnak_status dnak_keyhole_equivalent_params(const dnak_keyhole_config* cfg,
                                                    dnak_double_nakagami_params* out);
/* LCR / average outage duration of the output SNR at threshold gamma > 0. */
DNAK_API dnak_status dnak_keyhole_snr_lcr(const dnak_keyhole_config* cfg, double gamma,
                                          dnak_method method, const dnak_quad_spec* spec,
                                          double* out);
DNAK_API dnak_status dnak_keyhole_snr_aod(const dnak_keyhole_config* cfg, double gamma,
                                          dnak_method method, const dnak_quad_spec* spec,
                                          double* out);
/* 10 log10(gamma M R / (avg_snr (omega_tx/m_tx)(omega_rx/m_rx))) */
DNAK_API dnak_status dnak_keyhole_normalized_threshold_db(const dnak_keyhole_config* cfg,
                                                          double gamma, double* out);
DNAK_API dnak_status dnak_keyhole_threshold_from_normalized_db(const dnak_keyhole_config* cfg,
                                                               double norm_db, double* out);

/* ------------------------------------------------------------------ */
/* random streams                                                      */
/* ------------------------------------------------------------------ */

typedef struct dnak_rng dnak_rng;

/* Deterministic: one (seed, stream) pair always yields the same draws. */
DNAK_API dnak_rng* dnak_rng_create(uint64_t seed, uint64_t stream);
/* Independent child stream, usable concurrently with its parent. */
DNAK_API dnak_rng* dnak_rng_fork(const dnak_rng* rng, uint64_t index);
DNAK_API void dnak_rng_destroy(dnak_rng* rng);

/* n i.i.d. static envelope draws into out[0..n-1]. */
DNAK_API dnak_status dnak_nakagami_sample(const dnak_nakagami_params* p, dnak_rng* rng,
                                          size_t n, double* out);

/* ------------------------------------------------------------------ */
/* Monte Carlo envelope simulator                                      */
/* ------------------------------------------------------------------ */

typedef struct dnak_doppler_spec {
    double max_doppler_hz; /* > 0 */
    int oscillators;       /* sum-of-sinusoids order, >= 8 */
    double sample_rate_hz; /* >= 16 * max_doppler_hz */
} dnak_doppler_spec;

typedef struct dnak_trace dnak_trace;

/* Correlated Nakagami envelope trace; requires 2m integer and
 * d->max_doppler_hz == p->doppler_hz. */
DNAK_API dnak_status dnak_gen_nakagami_trace(const dnak_nakagami_params* p,
                                             const dnak_doppler_spec* d, size_t n_samples,
                                             dnak_rng* rng, dnak_trace** out);
DNAK_API dnak_status dnak_product_trace(const dnak_trace* x, const dnak_trace* y,
                                        dnak_trace** out);
DNAK_API dnak_status dnak_keyhole_snr_trace(const dnak_keyhole_config* cfg,
                                            const dnak_doppler_spec* d_alpha,
                                            const dnak_doppler_spec* d_beta,
                                            size_t n_samples, dnak_rng* rng,
                                            dnak_trace** out);

DNAK_API size_t dnak_trace_length(const dnak_trace* trace);
DNAK_API double dnak_trace_sample_rate(const dnak_trace* trace);
/* Borrowed pointer, valid until the trace is destroyed. */
DNAK_API const double* dnak_trace_samples(const dnak_trace* trace);
DNAK_API void dnak_trace_destroy(dnak_trace* trace);

/* Binary trace file: magic "FDST", u32 version 1, f64 sample rate (16-byte
 * header), then little-endian f64 samples. */
DNAK_API dnak_status dnak_trace_write(const dnak_trace* trace, const char* path);
DNAK_API dnak_status dnak_trace_read(const char* path, dnak_trace** out);

typedef struct dnak_crossing_stats {
    double threshold;
    uint64_t down_crossings;
    double duration_s;
    double time_below_s;
    double lcr_hz;
    double afd_s;
    double lcr_ci_halfwidth_hz;
} dnak_crossing_stats;

DNAK_API dnak_status dnak_trace_crossing_stats(const dnak_trace* trace, double threshold,
                                               dnak_crossing_stats* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DNAK_H */
