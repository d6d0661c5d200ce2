// dnak command line: threshold sweeps of the double Nakagami-m product
// process and of STBC keyhole-channel output SNR, Monte Carlo trace export,
// and the built-in validation suite. Links only the public C API.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dnak/dnak.h"
#include "sweep.hpp"
#include "validate.hpp"

namespace {

using dnak_cli::ConfigurationError;
using dnak_cli::ComputationError;
using dnak_cli::SweepMode;
using dnak_cli::SweepRequest;

struct SweepOptions {
    std::string config;
    std::string out;

    std::optional<double> m_x, omega_x, f_mx, m_y, omega_y, f_my;
    std::optional<int> tx_antennas, rx_antennas;
    std::optional<double> m_t, m_r, omega_t, omega_r, f_alpha, f_beta, stbc_rate, avg_snr;

    std::optional<double> grid_min_db, grid_max_db;
    std::optional<int> grid_points;
    std::optional<std::string> methods;
    std::optional<std::uint64_t> mc_duration_symbols, mc_seed;
    std::optional<int> mc_oscillators;
    std::optional<double> mc_sample_rate_factor;
    std::optional<double> quad_abs_tol, quad_rel_tol;
    std::optional<int> quad_max_subdivisions;
};

void add_common_sweep_flags(CLI::App* cmd, SweepOptions& o) {
    cmd->add_option("--config", o.config, "key = value configuration file");
    cmd->add_option("--out", o.out, "write the CSV here instead of stdout");
    cmd->add_option("--grid_min_db", o.grid_min_db, "lower normalized threshold (dB)");
    cmd->add_option("--grid_max_db", o.grid_max_db, "upper normalized threshold (dB)");
    cmd->add_option("--grid_points", o.grid_points, "number of grid points");
    cmd->add_option("--methods", o.methods, "comma list of exact,laplace,montecarlo");
    cmd->add_option("--mc_duration_symbols", o.mc_duration_symbols,
                    "Monte Carlo trace length in samples");
    cmd->add_option("--mc_seed", o.mc_seed, "Monte Carlo master seed");
    cmd->add_option("--mc_oscillators", o.mc_oscillators, "sum-of-sinusoids order");
    cmd->add_option("--mc_sample_rate_factor", o.mc_sample_rate_factor,
                    "sample rate as a multiple of the largest Doppler shift");
    cmd->add_option("--quad_abs_tol", o.quad_abs_tol, "quadrature absolute tolerance");
    cmd->add_option("--quad_rel_tol", o.quad_rel_tol, "quadrature relative tolerance");
    cmd->add_option("--quad_max_subdivisions", o.quad_max_subdivisions,
                    "quadrature subdivision budget");
}

template <typename T, typename U>
void apply(const std::optional<T>& src, U& dst) {
    if (src) dst = static_cast<U>(*src);
}

SweepRequest build_request(SweepMode mode, const SweepOptions& o) {
    SweepRequest req;
    if (!o.config.empty()) {
        req = dnak_cli::parse_config_file(o.config, mode);
    } else {
        req.mode = mode;
    }

    apply(o.m_x, req.dn.x_branch.m);
    apply(o.omega_x, req.dn.x_branch.omega);
    apply(o.f_mx, req.dn.x_branch.doppler_hz);
    apply(o.m_y, req.dn.y_branch.m);
    apply(o.omega_y, req.dn.y_branch.omega);
    apply(o.f_my, req.dn.y_branch.doppler_hz);

    apply(o.tx_antennas, req.kh.tx_antennas);
    apply(o.rx_antennas, req.kh.rx_antennas);
    apply(o.m_t, req.kh.m_tx);
    apply(o.m_r, req.kh.m_rx);
    apply(o.omega_t, req.kh.omega_tx);
    apply(o.omega_r, req.kh.omega_rx);
    apply(o.f_alpha, req.kh.doppler_tx_hz);
    apply(o.f_beta, req.kh.doppler_rx_hz);
    apply(o.stbc_rate, req.kh.stbc_rate);
    apply(o.avg_snr, req.kh.avg_snr);

    apply(o.grid_min_db, req.grid_min_db);
    apply(o.grid_max_db, req.grid_max_db);
    apply(o.grid_points, req.grid_points);
    if (o.methods) req.methods = dnak_cli::parse_methods_list(*o.methods);
    apply(o.mc_duration_symbols, req.mc_duration_symbols);
    apply(o.mc_seed, req.mc_seed);
    apply(o.mc_oscillators, req.mc_oscillators);
    apply(o.mc_sample_rate_factor, req.mc_sample_rate_factor);
    apply(o.quad_abs_tol, req.quad.abs_tol);
    apply(o.quad_rel_tol, req.quad.rel_tol);
    apply(o.quad_max_subdivisions, req.quad.max_subdivisions);

    req.validate();
    return req;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ComputationError("cannot open output file: " + out_path);
    out << text;
    if (!out)
        throw ComputationError("short write to output file: " + out_path);
}

int run_sweep_command(SweepMode mode, const SweepOptions& o) {
    const SweepRequest req = build_request(mode, o);
    emit(dnak_cli::run_sweep(req), o.out);
    return 0;
}

struct SimulateOptions {
    std::string kind = "nakagami";
    std::string out;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 1;
    int oscillators = 32;
    double sample_rate_factor = 64.0;

    double m = 1.0, omega = 1.0, f_d = 1.0;
    double m_x = 1.0, omega_x = 1.0, f_mx = 1.0;
    double m_y = 1.0, omega_y = 1.0, f_my = 1.0;
    int tx_antennas = 1, rx_antennas = 1;
    double m_t = 1.0, m_r = 1.0, omega_t = 1.0, omega_r = 1.0;
    double f_alpha = 1.0, f_beta = 1.0, stbc_rate = 1.0, avg_snr = 1.0;
};

void check_sim(dnak_status st, const char* what) {
    if (st == DNAK_OK) return;
    const std::string msg = std::string(what) + ": " + dnak_last_error();
    if (st == DNAK_ERROR_CONFIG || st == DNAK_ERROR_DOMAIN)
        throw ConfigurationError(msg);
    throw ComputationError(msg);
}

int run_simulate_command(const SimulateOptions& o) {
    if (o.out.empty())
        throw ConfigurationError("simulate requires --out");
    if (o.samples < 2)
        throw ConfigurationError("--samples must be >= 2");

    dnak_rng* rng = dnak_rng_create(o.seed, 0);
    dnak_trace* trace = nullptr;
    if (o.kind == "nakagami") {
        const dnak_nakagami_params p{o.m, o.omega, o.f_d};
        const dnak_doppler_spec d{o.f_d, o.oscillators, o.sample_rate_factor * o.f_d};
        check_sim(dnak_gen_nakagami_trace(&p, &d, o.samples, rng, &trace), "trace");
    } else if (o.kind == "double") {
        const double fs = o.sample_rate_factor * std::max(o.f_mx, o.f_my);
        const dnak_nakagami_params px{o.m_x, o.omega_x, o.f_mx};
        const dnak_nakagami_params py{o.m_y, o.omega_y, o.f_my};
        const dnak_doppler_spec dx{o.f_mx, o.oscillators, fs};
        const dnak_doppler_spec dy{o.f_my, o.oscillators, fs};
        dnak_rng* rng_x = dnak_rng_fork(rng, 0);
        dnak_rng* rng_y = dnak_rng_fork(rng, 1);
        dnak_trace* tx = nullptr;
        dnak_trace* ty = nullptr;
        try {
            check_sim(dnak_gen_nakagami_trace(&px, &dx, o.samples, rng_x, &tx), "X trace");
            check_sim(dnak_gen_nakagami_trace(&py, &dy, o.samples, rng_y, &ty), "Y trace");
            check_sim(dnak_product_trace(tx, ty, &trace), "product");
        } catch (...) {
            dnak_trace_destroy(tx);
            dnak_trace_destroy(ty);
            dnak_rng_destroy(rng_x);
            dnak_rng_destroy(rng_y);
            dnak_rng_destroy(rng);
            throw;
        }
        dnak_trace_destroy(tx);
        dnak_trace_destroy(ty);
        dnak_rng_destroy(rng_x);
        dnak_rng_destroy(rng_y);
    } else if (o.kind == "keyhole") {
        const dnak_keyhole_config cfg{o.tx_antennas, o.rx_antennas, o.m_t, o.m_r,
                                      o.omega_t, o.omega_r, o.f_alpha, o.f_beta,
                                      o.stbc_rate, o.avg_snr};
        const double fs = o.sample_rate_factor * std::max(o.f_alpha, o.f_beta);
        const dnak_doppler_spec da{o.f_alpha, o.oscillators, fs};
        const dnak_doppler_spec db{o.f_beta, o.oscillators, fs};
        check_sim(dnak_keyhole_snr_trace(&cfg, &da, &db, o.samples, rng, &trace), "trace");
    } else {
        dnak_rng_destroy(rng);
        throw ConfigurationError("unknown --kind '" + o.kind +
                                 "' (expected nakagami, double, keyhole)");
    }

    const dnak_status st = dnak_trace_write(trace, o.out.c_str());
    const std::size_t n = dnak_trace_length(trace);
    const double fs = dnak_trace_sample_rate(trace);
    dnak_trace_destroy(trace);
    dnak_rng_destroy(rng);
    if (st != DNAK_OK)
        throw ComputationError(std::string("trace write: ") + dnak_last_error());

    std::cout << "wrote " << n << " samples at " << fs << " Hz to " << o.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"second-order statistics of double Nakagami-m fading and STBC keyhole "
                 "MIMO output SNR"};
    app.require_subcommand(1);

    SweepOptions dbl_opts;
    CLI::App* dbl = app.add_subcommand(
        "double", "sweep LCR/AFD of the product process Z = XY over a normalized grid");
    add_common_sweep_flags(dbl, dbl_opts);
    dbl->add_option("--m_x", dbl_opts.m_x, "X-branch severity (>= 0.5)");
    dbl->add_option("--omega_x", dbl_opts.omega_x, "X-branch power E[X^2]");
    dbl->add_option("--f_mx", dbl_opts.f_mx, "X-branch maximum Doppler shift (Hz)");
    dbl->add_option("--m_y", dbl_opts.m_y, "Y-branch severity (>= 0.5)");
    dbl->add_option("--omega_y", dbl_opts.omega_y, "Y-branch power E[Y^2]");
    dbl->add_option("--f_my", dbl_opts.f_my, "Y-branch maximum Doppler shift (Hz)");

    SweepOptions kh_opts;
    CLI::App* kh = app.add_subcommand(
        "keyhole", "sweep LCR/AOD of the STBC keyhole-channel output SNR");
    add_common_sweep_flags(kh, kh_opts);
    kh->add_option("--tx_antennas", kh_opts.tx_antennas, "transmit antennas M");
    kh->add_option("--rx_antennas", kh_opts.rx_antennas, "receive antennas N");
    kh->add_option("--m_t", kh_opts.m_t, "per-hop transmit-side severity");
    kh->add_option("--m_r", kh_opts.m_r, "per-hop receive-side severity");
    kh->add_option("--omega_t", kh_opts.omega_t, "per-hop transmit-side power");
    kh->add_option("--omega_r", kh_opts.omega_r, "per-hop receive-side power");
    kh->add_option("--f_alpha", kh_opts.f_alpha, "transmit-side Doppler shift (Hz)");
    kh->add_option("--f_beta", kh_opts.f_beta, "receive-side Doppler shift (Hz)");
    kh->add_option("--stbc_rate", kh_opts.stbc_rate, "space-time code rate R");
    kh->add_option("--avg_snr", kh_opts.avg_snr, "average SNR per receive antenna (linear)");

    SimulateOptions sim_opts;
    CLI::App* sim = app.add_subcommand("simulate", "generate a trace and export it");
    sim->add_option("--kind", sim_opts.kind, "nakagami, double, or keyhole");
    sim->add_option("--out", sim_opts.out, "output trace file")->required();
    sim->add_option("--samples", sim_opts.samples, "trace length");
    sim->add_option("--seed", sim_opts.seed, "random seed");
    sim->add_option("--oscillators", sim_opts.oscillators, "sum-of-sinusoids order");
    sim->add_option("--sample_rate_factor", sim_opts.sample_rate_factor,
                    "sample rate as a multiple of the largest Doppler shift");
    sim->add_option("--m", sim_opts.m, "severity (kind = nakagami)");
    sim->add_option("--omega", sim_opts.omega, "power (kind = nakagami)");
    sim->add_option("--f_d", sim_opts.f_d, "Doppler shift (kind = nakagami)");
    sim->add_option("--m_x", sim_opts.m_x, "X severity (kind = double)");
    sim->add_option("--omega_x", sim_opts.omega_x, "X power (kind = double)");
    sim->add_option("--f_mx", sim_opts.f_mx, "X Doppler (kind = double)");
    sim->add_option("--m_y", sim_opts.m_y, "Y severity (kind = double)");
    sim->add_option("--omega_y", sim_opts.omega_y, "Y power (kind = double)");
    sim->add_option("--f_my", sim_opts.f_my, "Y Doppler (kind = double)");
    sim->add_option("--tx_antennas", sim_opts.tx_antennas, "M (kind = keyhole)");
    sim->add_option("--rx_antennas", sim_opts.rx_antennas, "N (kind = keyhole)");
    sim->add_option("--m_t", sim_opts.m_t, "per-hop tx severity (kind = keyhole)");
    sim->add_option("--m_r", sim_opts.m_r, "per-hop rx severity (kind = keyhole)");
    sim->add_option("--omega_t", sim_opts.omega_t, "per-hop tx power (kind = keyhole)");
    sim->add_option("--omega_r", sim_opts.omega_r, "per-hop rx power (kind = keyhole)");
    sim->add_option("--f_alpha", sim_opts.f_alpha, "tx Doppler (kind = keyhole)");
    sim->add_option("--f_beta", sim_opts.f_beta, "rx Doppler (kind = keyhole)");
    sim->add_option("--stbc_rate", sim_opts.stbc_rate, "code rate (kind = keyhole)");
    sim->add_option("--avg_snr", sim_opts.avg_snr, "average SNR (kind = keyhole)");

    CLI::App* val = app.add_subcommand("validate", "run the built-in validation suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(dbl))
            return run_sweep_command(SweepMode::double_nakagami, dbl_opts);
        if (app.got_subcommand(kh))
            return run_sweep_command(SweepMode::keyhole, kh_opts);
        if (app.got_subcommand(sim))
            return run_simulate_command(sim_opts);
        if (app.got_subcommand(val))
            return dnak_cli::run_acceptance(std::cout) == 0 ? 0 : 1;
    } catch (const ConfigurationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ComputationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
