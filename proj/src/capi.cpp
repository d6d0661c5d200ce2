#include "dnak/dnak.h"

#include <cstring>
#include <new>
#include <string>

#include "double_nakagami.hpp"
#include "errors.hpp"
#include "keyhole.hpp"
#include "numerics.hpp"
#include "rng.hpp"
#include "simulator.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const char* msg) { g_last_error = msg ? msg : "unknown error"; }

template <typename Fn>
dnak_status wrap(Fn&& fn) noexcept {
    try {
        fn();
        return DNAK_OK;
    } catch (const dnak::ConvergenceError& e) {
        set_error(e.what());
        return DNAK_ERROR_CONVERGENCE;
    } catch (const dnak::ConsistencyError& e) {
        set_error(e.what());
        return DNAK_ERROR_CONSISTENCY;
    } catch (const dnak::ConfigError& e) {
        set_error(e.what());
        return DNAK_ERROR_CONFIG;
    } catch (const dnak::IoError& e) {
        set_error(e.what());
        return DNAK_ERROR_IO;
    } catch (const dnak::DomainError& e) {
        set_error(e.what());
        return DNAK_ERROR_DOMAIN;
    } catch (const std::bad_alloc&) {
        set_error("out of memory");
        return DNAK_ERROR_INTERNAL;
    } catch (const std::exception& e) {
        set_error(e.what());
        return DNAK_ERROR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return DNAK_ERROR_INTERNAL;
    }
}

dnak_status null_arg(const char* name) {
    g_last_error = std::string(name) + " must not be NULL";
    return DNAK_ERROR_NULL_ARGUMENT;
}

dnak::NakagamiParams to_cpp(const dnak_nakagami_params& p) {
    return dnak::NakagamiParams{p.m, p.omega, p.doppler_hz};
}

dnak::DoubleNakagamiParams to_cpp(const dnak_double_nakagami_params& p) {
    return dnak::DoubleNakagamiParams{to_cpp(p.x_branch), to_cpp(p.y_branch)};
}

dnak::KeyholeConfig to_cpp(const dnak_keyhole_config& c) {
    return dnak::KeyholeConfig{c.tx_antennas,   c.rx_antennas, c.m_tx,
                               c.m_rx,          c.omega_tx,    c.omega_rx,
                               c.doppler_tx_hz, c.doppler_rx_hz,
                               c.stbc_rate,     c.avg_snr};
}

dnak::numerics::QuadratureSpec to_cpp_spec(const dnak_quad_spec* spec) {
    if (!spec) return dnak::numerics::QuadratureSpec{};
    return dnak::numerics::QuadratureSpec{spec->abs_tol, spec->rel_tol,
                                          spec->max_subdivisions};
}

dnak::DopplerSpec to_cpp(const dnak_doppler_spec& d) {
    return dnak::DopplerSpec{d.max_doppler_hz, d.oscillators, d.sample_rate_hz};
}

} // namespace

struct dnak_rng {
    dnak::RandomStream stream;
};

struct dnak_trace {
    dnak::EnvelopeTrace trace;
};

extern "C" {

const char* dnak_version(void) { return "1.0.0"; }

const char* dnak_status_name(dnak_status status) {
    switch (status) {
        case DNAK_OK: return "ok";
        case DNAK_ERROR_DOMAIN: return "domain error";
        case DNAK_ERROR_CONVERGENCE: return "convergence error";
        case DNAK_ERROR_CONSISTENCY: return "consistency error";
        case DNAK_ERROR_CONFIG: return "config error";
        case DNAK_ERROR_IO: return "io error";
        case DNAK_ERROR_NULL_ARGUMENT: return "null argument";
        case DNAK_ERROR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* dnak_last_error(void) { return g_last_error.c_str(); }

void dnak_quad_spec_default(dnak_quad_spec* spec) {
    if (!spec) return;
    const dnak::numerics::QuadratureSpec d{};
    spec->abs_tol = d.abs_tol;
    spec->rel_tol = d.rel_tol;
    spec->max_subdivisions = d.max_subdivisions;
}

dnak_status dnak_ln_gamma(double a, double* out) {
    if (!out) return null_arg("out");
    return wrap([&] { *out = dnak::numerics::ln_gamma(a); });
}

dnak_status dnak_reg_lower_gamma(double a, double u, double* out) {
    if (!out) return null_arg("out");
    return wrap([&] { *out = dnak::numerics::reg_lower_gamma(a, u); });
}

dnak_status dnak_integrate_semiinfinite(dnak_integrand_fn f, void* user,
                                        const dnak_quad_spec* spec,
                                        double* value, double* err_estimate) {
    if (!f) return null_arg("f");
    if (!value) return null_arg("value");
    if (!err_estimate) return null_arg("err_estimate");
    try {
        const auto r = dnak::numerics::integrate_semiinfinite(
            [f, user](double x) { return f(x, user); }, to_cpp_spec(spec));
        *value = r.value;
        *err_estimate = r.err_estimate;
        return DNAK_OK;
    } catch (const dnak::ConvergenceError& e) {
        *value = e.best_estimate;
        *err_estimate = e.err_bound;
        set_error(e.what());
        return DNAK_ERROR_CONVERGENCE;
    } catch (const std::exception& e) {
        set_error(e.what());
        return DNAK_ERROR_DOMAIN;
    }
}

dnak_status dnak_nakagami_pdf(const dnak_nakagami_params* p, double x, double* out) {
    if (!p) return null_arg("p");
    if (!out) return null_arg("out");
    return wrap([&] { *out = dnak::nakagami::pdf(to_cpp(*p), x); });
}

dnak_status dnak_nakagami_cdf(const dnak_nakagami_params* p, double x, double* out) {
    if (!p) return null_arg("p");
    if (!out) return null_arg("out");
    return wrap([&] { *out = dnak::nakagami::cdf(to_cpp(*p), x); });
}

dnak_status dnak_nakagami_derivative_std(const dnak_nakagami_params* p, double* out) {
    if (!p) return null_arg("p");
    if (!out) return null_arg("out");
    return wrap([&] { *out = dnak::nakagami::derivative_std(to_cpp(*p)); });
}

dnak_status dnak_nakagami_single_envelope_lcr(const dnak_nakagami_params* p,
                                              double level, double* out) {
    if (!p) return null_arg("p");
    if (!out) return null_arg("out");
    return wrap([&] { *out = dnak::nakagami::single_envelope_lcr(to_cpp(*p), level); });
}

dnak_status dnak_double_lcr_exact(const dnak_double_nakagami_params* p, double z,
                                  const dnak_quad_spec* spec, double* out) {
    if (!p) return null_arg("p");
    if (!out) return null_arg("out");
    return wrap([&] {
        *out = dnak::double_nakagami::lcr_exact(to_cpp(*p), z, to_cpp_spec(spec));
    });
}

dnak_status dnak_double_cdf(const dnak_double_nakagami_params* p, double z,
                            const dnak_quad_spec* spec, double* out) {
    if (!p) return null_arg("p");
    if (!out) return null_arg("out");
    return wrap([&] {
        *out = dnak::double_nakagami::cdf(to_cpp(*p), z, to_cpp_spec(spec));
    });
}

dnak_status dnak_double_afd_exact(const dnak_double_nakagami_params* p, double z,
                                  const dnak_quad_spec* spec, double* out) {
    if (!p) return null_arg("p");
    if (!out) return null_arg("out");
    return wrap([&] {
        *out = dnak::double_nakagami::afd_exact(to_cpp(*p), z, to_cpp_spec(spec));
    });
}

dnak_status dnak_double_laplace_core(const dnak_double_nakagami_params* p, double z,
                                     dnak_laplace_core* out) {
    if (!p) return null_arg("p");
    if (!out) return null_arg("out");
    return wrap([&] {
        const auto core = dnak::double_nakagami::laplace_core(to_cpp(*p), z);
        out->x0 = core.x0;
        out->f_at_x0 = core.f_at_x0;
        out->f2_at_x0 = core.f2_at_x0;
        out->g_at_x0 = core.g_at_x0;
    });
}

dnak_status dnak_double_lcr_laplace(const dnak_double_nakagami_params* p, double z,
                                    double* out) {
    if (!p) return null_arg("p");
    if (!out) return null_arg("out");
    return wrap([&] { *out = dnak::double_nakagami::lcr_laplace(to_cpp(*p), z); });
}

dnak_status dnak_double_afd_laplace(const dnak_double_nakagami_params* p, double z,
                                    const dnak_quad_spec* spec, double* out) {
    if (!p) return null_arg("p");
    if (!out) return null_arg("out");
    return wrap([&] {
        *out = dnak::double_nakagami::afd_laplace(to_cpp(*p), z, to_cpp_spec(spec));
    });
}

dnak_status dnak_keyhole_equivalent_params(const dnak_keyhole_config* cfg,
                                           dnak_double_nakagami_params* out) {
    if (!cfg) return null_arg("cfg");
    if (!out) return null_arg("out");
    return wrap([&] {
        const auto p = dnak::keyhole::equivalent_double_nakagami(to_cpp(*cfg));
        out->x_branch = {p.x_branch.m, p.x_branch.omega, p.x_branch.doppler_hz};
        out->y_branch = {p.y_branch.m, p.y_branch.omega, p.y_branch.doppler_hz};
    });
}

dnak_status dnak_keyhole_snr_lcr(const dnak_keyhole_config* cfg, double gamma,
                                 dnak_method method, const dnak_quad_spec* spec,
                                 double* out) {
    if (!cfg) return null_arg("cfg");
    if (!out) return null_arg("out");
    return wrap([&] {
        const auto m = method == DNAK_METHOD_EXACT ? dnak::Method::exact
                                                   : dnak::Method::laplace;
        *out = dnak::keyhole::snr_lcr(to_cpp(*cfg), gamma, m, to_cpp_spec(spec));
    });
}

dnak_status dnak_keyhole_snr_aod(const dnak_keyhole_config* cfg, double gamma,
                                 dnak_method method, const dnak_quad_spec* spec,
                                 double* out) {
    if (!cfg) return null_arg("cfg");
    if (!out) return null_arg("out");
    return wrap([&] {
        const auto m = method == DNAK_METHOD_EXACT ? dnak::Method::exact
                                                   : dnak::Method::laplace;
        *out = dnak::keyhole::snr_aod(to_cpp(*cfg), gamma, m, to_cpp_spec(spec));
    });
}

dnak_status dnak_keyhole_normalized_threshold_db(const dnak_keyhole_config* cfg,
                                                 double gamma, double* out) {
    if (!cfg) return null_arg("cfg");
    if (!out) return null_arg("out");
    return wrap([&] {
        *out = dnak::keyhole::normalized_threshold_db(to_cpp(*cfg), gamma);
    });
}

dnak_status dnak_keyhole_threshold_from_normalized_db(const dnak_keyhole_config* cfg,
                                                      double norm_db, double* out) {
    if (!cfg) return null_arg("cfg");
    if (!out) return null_arg("out");
    return wrap([&] {
        *out = dnak::keyhole::threshold_from_normalized_db(to_cpp(*cfg), norm_db);
    });
}

dnak_rng* dnak_rng_create(uint64_t seed, uint64_t stream) {
    return new (std::nothrow) dnak_rng{dnak::RandomStream(seed, stream)};
}

dnak_rng* dnak_rng_fork(const dnak_rng* rng, uint64_t index) {
    if (!rng) return nullptr;
    return new (std::nothrow) dnak_rng{rng->stream.fork(index)};
}

void dnak_rng_destroy(dnak_rng* rng) { delete rng; }

dnak_status dnak_nakagami_sample(const dnak_nakagami_params* p, dnak_rng* rng,
                                 size_t n, double* out) {
    if (!p) return null_arg("p");
    if (!rng) return null_arg("rng");
    if (!out) return null_arg("out");
    return wrap([&] {
        const auto v = dnak::nakagami::sample(to_cpp(*p), rng->stream, n);
        std::memcpy(out, v.data(), v.size() * sizeof(double));
    });
}

dnak_status dnak_gen_nakagami_trace(const dnak_nakagami_params* p,
                                    const dnak_doppler_spec* d, size_t n_samples,
                                    dnak_rng* rng, dnak_trace** out) {
    if (!p) return null_arg("p");
    if (!d) return null_arg("d");
    if (!rng) return null_arg("rng");
    if (!out) return null_arg("out");
    return wrap([&] {
        auto trace = dnak::sim::gen_nakagami_trace(to_cpp(*p), to_cpp(*d),
                                                   n_samples, rng->stream);
        *out = new dnak_trace{std::move(trace)};
    });
}

dnak_status dnak_product_trace(const dnak_trace* x, const dnak_trace* y,
                               dnak_trace** out) {
    if (!x) return null_arg("x");
    if (!y) return null_arg("y");
    if (!out) return null_arg("out");
    return wrap([&] {
        *out = new dnak_trace{dnak::sim::product_trace(x->trace, y->trace)};
    });
}

dnak_status dnak_keyhole_snr_trace(const dnak_keyhole_config* cfg,
                                   const dnak_doppler_spec* d_alpha,
                                   const dnak_doppler_spec* d_beta,
                                   size_t n_samples, dnak_rng* rng, dnak_trace** out) {
    if (!cfg) return null_arg("cfg");
    if (!d_alpha) return null_arg("d_alpha");
    if (!d_beta) return null_arg("d_beta");
    if (!rng) return null_arg("rng");
    if (!out) return null_arg("out");
    return wrap([&] {
        auto trace = dnak::sim::keyhole_snr_trace(to_cpp(*cfg), to_cpp(*d_alpha),
                                                  to_cpp(*d_beta), n_samples,
                                                  rng->stream);
        *out = new dnak_trace{std::move(trace)};
    });
}

size_t dnak_trace_length(const dnak_trace* trace) {
    return trace ? trace->trace.samples.size() : 0;
}

double dnak_trace_sample_rate(const dnak_trace* trace) {
    return trace ? trace->trace.sample_rate_hz : 0.0;
}

const double* dnak_trace_samples(const dnak_trace* trace) {
    return trace ? trace->trace.samples.data() : nullptr;
}

void dnak_trace_destroy(dnak_trace* trace) { delete trace; }

dnak_status dnak_trace_write(const dnak_trace* trace, const char* path) {
    if (!trace) return null_arg("trace");
    if (!path) return null_arg("path");
    return wrap([&] { dnak::sim::write_trace(trace->trace, path); });
}

dnak_status dnak_trace_read(const char* path, dnak_trace** out) {
    if (!path) return null_arg("path");
    if (!out) return null_arg("out");
    return wrap([&] { *out = new dnak_trace{dnak::sim::read_trace(path)}; });
}

dnak_status dnak_trace_crossing_stats(const dnak_trace* trace, double threshold,
                                      dnak_crossing_stats* out) {
    if (!trace) return null_arg("trace");
    if (!out) return null_arg("out");
    return wrap([&] {
        const auto s = dnak::sim::crossing_stats(trace->trace, threshold);
        out->threshold = s.threshold;
        out->down_crossings = s.down_crossings;
        out->duration_s = s.duration_s;
        out->time_below_s = s.time_below_s;
        out->lcr_hz = s.lcr_hz;
        out->afd_s = s.afd_s;
        out->lcr_ci_halfwidth_hz = s.lcr_ci_halfwidth_hz;
    });
}

} // extern "C"
