#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

namespace dnak_cli {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void fail_config(const std::string& msg) { throw ConfigurationError(msg); }

void check(dnak_status st, const char* what) {
    if (st != DNAK_OK)
        fail_config(std::string(what) + ": " + dnak_last_error());
}

struct RngHandle {
    explicit RngHandle(dnak_rng* r) : rng(r) {}
    ~RngHandle() { dnak_rng_destroy(rng); }
    RngHandle(const RngHandle&) = delete;
    RngHandle& operator=(const RngHandle&) = delete;
    dnak_rng* rng;
};

struct TraceHandle {
    TraceHandle() = default;
    ~TraceHandle() { dnak_trace_destroy(trace); }
    TraceHandle(const TraceHandle&) = delete;
    TraceHandle& operator=(const TraceHandle&) = delete;
    dnak_trace* trace = nullptr;
};

} // namespace

double SweepRequest::normalization_doppler_hz() const {
    if (mode == SweepMode::keyhole)
        return std::max(kh.doppler_tx_hz, kh.doppler_rx_hz);
    return std::max(dn.x_branch.doppler_hz, dn.y_branch.doppler_hz);
}

void SweepRequest::validate() const {
    if (!(grid_min_db < grid_max_db))
        fail_config("grid_min_db must be < grid_max_db");
    if (grid_points < 2)
        fail_config("grid_points must be >= 2");
    if ((methods & (kMethodExact | kMethodLaplace | kMethodMonteCarlo)) == 0)
        fail_config("at least one method (exact, laplace, montecarlo) is required");

    double ignored = 0.0;
    if (quad.abs_tol <= 0.0 || quad.rel_tol <= 0.0 || quad.max_subdivisions < 1)
        fail_config("quadrature tolerances must be positive and max_subdivisions >= 1");

    // Let the library's own invariants produce the diagnostic text.
    if (mode == SweepMode::keyhole) {
        dnak_double_nakagami_params mapped{};
        check(dnak_keyhole_equivalent_params(&kh, &mapped), "invalid keyhole configuration");
    } else {
        check(dnak_nakagami_derivative_std(&dn.x_branch, &ignored), "invalid X branch");
        check(dnak_nakagami_derivative_std(&dn.y_branch, &ignored), "invalid Y branch");
    }

    if (normalization_doppler_hz() <= 0.0)
        fail_config("at least one branch Doppler shift must be positive");

    if (methods & kMethodMonteCarlo) {
        const double f1 = mode == SweepMode::keyhole ? kh.doppler_tx_hz : dn.x_branch.doppler_hz;
        const double f2 = mode == SweepMode::keyhole ? kh.doppler_rx_hz : dn.y_branch.doppler_hz;
        if (f1 <= 0.0 || f2 <= 0.0)
            fail_config("montecarlo requires nonzero Doppler shifts on both branches");
        auto half_integer = [](double m) { return std::fabs(2.0 * m - std::round(2.0 * m)) < 1e-9; };
        const double m1 = mode == SweepMode::keyhole ? kh.m_tx : dn.x_branch.m;
        const double m2 = mode == SweepMode::keyhole ? kh.m_rx : dn.y_branch.m;
        if (!half_integer(m1) || !half_integer(m2))
            fail_config("montecarlo requires 2m to be an integer on both branches");
        if (mc_oscillators < 8)
            fail_config("mc_oscillators must be >= 8");
        if (mc_sample_rate_factor < 16.0)
            fail_config("mc_sample_rate_factor must be >= 16");
        if (mc_duration_symbols < 2)
            fail_config("mc_duration_symbols must be >= 2");
    }
}

namespace {

// ---------------------------------------------------------------- parsing

struct KeyValue {
    std::string value;
    int line;
};

using KvMap = std::map<std::string, KeyValue>;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

KvMap tokenize(const std::string& text, const std::string& origin) {
    KvMap kv;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail_config(origin + ":" + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            fail_config(origin + ":" + std::to_string(line_no) + ": expected key = value");
        if (kv.count(key))
            fail_config(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
        kv[key] = {value, line_no};
    }
    return kv;
}

double to_double(const std::string& origin, const std::string& key, const KeyValue& kv) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail_config(origin + ":" + std::to_string(kv.line) + ": '" + key +
                    "' expects a number, got '" + kv.value + "'");
    }
}

std::int64_t to_int(const std::string& origin, const std::string& key, const KeyValue& kv) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail_config(origin + ":" + std::to_string(kv.line) + ": '" + key +
                    "' expects an integer, got '" + kv.value + "'");
    }
}

} // namespace

unsigned parse_methods_list(const std::string& csv) {
    unsigned mask = 0;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        const std::string t = trim(tok);
        if (t == "exact") mask |= kMethodExact;
        else if (t == "laplace") mask |= kMethodLaplace;
        else if (t == "montecarlo") mask |= kMethodMonteCarlo;
        else
            fail_config("unknown method '" + t + "' (expected exact, laplace, montecarlo)");
    }
    if (mask == 0)
        fail_config("methods list is empty");
    return mask;
}

SweepRequest parse_config_text(const std::string& text, SweepMode mode,
                               const std::string& origin) {
    SweepRequest req;
    req.mode = mode;

    KvMap kv = tokenize(text, origin);
    auto take = [&kv](const char* key) -> std::optional<KeyValue> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        KeyValue out = it->second;
        kv.erase(it);
        return out;
    };
    auto dbl = [&](const char* key, double& dst) {
        if (auto v = take(key)) dst = to_double(origin, key, *v);
    };
    auto intval = [&](const char* key, int& dst) {
        if (auto v = take(key)) dst = static_cast<int>(to_int(origin, key, *v));
    };
    auto u64val = [&](const char* key, std::uint64_t& dst) {
        if (auto v = take(key)) {
            const std::int64_t raw = to_int(origin, key, *v);
            if (raw < 0) fail_config(origin + ": '" + std::string(key) + "' must be nonnegative");
            dst = static_cast<std::uint64_t>(raw);
        }
    };

    if (mode == SweepMode::double_nakagami) {
        dbl("m_x", req.dn.x_branch.m);
        dbl("omega_x", req.dn.x_branch.omega);
        dbl("f_mx", req.dn.x_branch.doppler_hz);
        dbl("m_y", req.dn.y_branch.m);
        dbl("omega_y", req.dn.y_branch.omega);
        dbl("f_my", req.dn.y_branch.doppler_hz);
    } else {
        intval("tx_antennas", req.kh.tx_antennas);
        intval("rx_antennas", req.kh.rx_antennas);
        dbl("m_t", req.kh.m_tx);
        dbl("m_r", req.kh.m_rx);
        dbl("omega_t", req.kh.omega_tx);
        dbl("omega_r", req.kh.omega_rx);
        dbl("f_alpha", req.kh.doppler_tx_hz);
        dbl("f_beta", req.kh.doppler_rx_hz);
        dbl("stbc_rate", req.kh.stbc_rate);
        dbl("avg_snr", req.kh.avg_snr);
    }

    dbl("grid_min_db", req.grid_min_db);
    dbl("grid_max_db", req.grid_max_db);
    intval("grid_points", req.grid_points);
    if (auto v = take("methods")) {
        try {
            req.methods = parse_methods_list(v->value);
        } catch (const ConfigurationError& e) {
            fail_config(origin + ":" + std::to_string(v->line) + ": " + e.what());
        }
    }
    u64val("mc_duration_symbols", req.mc_duration_symbols);
    u64val("mc_seed", req.mc_seed);
    intval("mc_oscillators", req.mc_oscillators);
    dbl("mc_sample_rate_factor", req.mc_sample_rate_factor);
    dbl("quad_abs_tol", req.quad.abs_tol);
    dbl("quad_rel_tol", req.quad.rel_tol);
    intval("quad_max_subdivisions", req.quad.max_subdivisions);

    if (!kv.empty()) {
        const auto& bad = *kv.begin();
        fail_config(origin + ":" + std::to_string(bad.second.line) + ": unknown key '" +
                    bad.first + "'");
    }

    req.validate();
    return req;
}

SweepRequest parse_config_file(const std::string& path, SweepMode mode) {
    std::ifstream in(path);
    if (!in)
        fail_config("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), mode, path);
}

namespace {

// ------------------------------------------------------------- execution

struct Row {
    double threshold_db = 0.0;
    double z_linear = 0.0;
    std::optional<double> lcr_exact, lcr_laplace, lcr_mc, lcr_mc_ci;
    std::optional<double> afd_exact, afd_laplace, afd_mc;
    std::optional<double> cdf;
};

[[noreturn]] void fail_point(int index, double db, const char* what) {
    std::ostringstream msg;
    msg << "grid point " << index << " (threshold_db = " << db << "): " << what << ": "
        << dnak_last_error();
    throw ComputationError(msg.str());
}

void compute_point(const SweepRequest& req, int index, double db, Row& row) {
    row.threshold_db = db;
    const double f_m = req.normalization_doppler_hz();

    dnak_double_nakagami_params params{};
    double z = 0.0;
    if (req.mode == SweepMode::keyhole) {
        if (dnak_keyhole_equivalent_params(&req.kh, &params) != DNAK_OK)
            fail_point(index, db, "keyhole mapping");
        double gamma = 0.0;
        if (dnak_keyhole_threshold_from_normalized_db(&req.kh, db, &gamma) != DNAK_OK)
            fail_point(index, db, "threshold mapping");
        row.z_linear = gamma;
        z = std::sqrt(gamma * req.kh.tx_antennas * req.kh.stbc_rate / req.kh.avg_snr);
    } else {
        params = req.dn;
        const double unit = (params.x_branch.omega / params.x_branch.m) *
                            (params.y_branch.omega / params.y_branch.m);
        z = std::sqrt(std::pow(10.0, db / 10.0) * unit);
        row.z_linear = z;
    }

    if (req.methods & (kMethodExact | kMethodLaplace)) {
        double f = 0.0;
        if (dnak_double_cdf(&params, z, &req.quad, &f) != DNAK_OK)
            fail_point(index, db, "cdf");
        row.cdf = f;
    }
    if (req.methods & kMethodExact) {
        double n = 0.0, t = 0.0;
        if (dnak_double_lcr_exact(&params, z, &req.quad, &n) != DNAK_OK)
            fail_point(index, db, "lcr_exact");
        if (dnak_double_afd_exact(&params, z, &req.quad, &t) != DNAK_OK)
            fail_point(index, db, "afd_exact");
        row.lcr_exact = n / f_m;
        row.afd_exact = t * f_m;
    }
    if (req.methods & kMethodLaplace) {
        double n = 0.0, t = 0.0;
        if (dnak_double_lcr_laplace(&params, z, &n) != DNAK_OK)
            fail_point(index, db, "lcr_laplace");
        if (dnak_double_afd_laplace(&params, z, &req.quad, &t) != DNAK_OK)
            fail_point(index, db, "afd_laplace");
        row.lcr_laplace = n / f_m;
        row.afd_laplace = t * f_m;
    }
    if (req.methods & kMethodMonteCarlo) {
        RngHandle master(dnak_rng_create(req.mc_seed, 0));
        RngHandle point_rng(dnak_rng_fork(master.rng, static_cast<std::uint64_t>(index)));
        if (!point_rng.rng)
            fail_point(index, db, "rng");

        TraceHandle trace;
        if (req.mode == SweepMode::keyhole) {
            const double fs = req.mc_sample_rate_factor *
                              std::max(req.kh.doppler_tx_hz, req.kh.doppler_rx_hz);
            const dnak_doppler_spec da{req.kh.doppler_tx_hz, req.mc_oscillators, fs};
            const dnak_doppler_spec dbeta{req.kh.doppler_rx_hz, req.mc_oscillators, fs};
            if (dnak_keyhole_snr_trace(&req.kh, &da, &dbeta, req.mc_duration_symbols,
                                       point_rng.rng, &trace.trace) != DNAK_OK)
                fail_point(index, db, "keyhole trace");
        } else {
            const double fs = req.mc_sample_rate_factor *
                              std::max(req.dn.x_branch.doppler_hz, req.dn.y_branch.doppler_hz);
            RngHandle rng_x(dnak_rng_fork(point_rng.rng, 0));
            RngHandle rng_y(dnak_rng_fork(point_rng.rng, 1));
            const dnak_doppler_spec dx{req.dn.x_branch.doppler_hz, req.mc_oscillators, fs};
            const dnak_doppler_spec dy{req.dn.y_branch.doppler_hz, req.mc_oscillators, fs};
            TraceHandle tx, ty;
            if (dnak_gen_nakagami_trace(&req.dn.x_branch, &dx, req.mc_duration_symbols,
                                        rng_x.rng, &tx.trace) != DNAK_OK)
                fail_point(index, db, "X trace");
            if (dnak_gen_nakagami_trace(&req.dn.y_branch, &dy, req.mc_duration_symbols,
                                        rng_y.rng, &ty.trace) != DNAK_OK)
                fail_point(index, db, "Y trace");
            if (dnak_product_trace(tx.trace, ty.trace, &trace.trace) != DNAK_OK)
                fail_point(index, db, "product trace");
        }

        dnak_crossing_stats stats{};
        if (dnak_trace_crossing_stats(trace.trace, row.z_linear, &stats) != DNAK_OK)
            fail_point(index, db, "crossing stats");
        row.lcr_mc = stats.lcr_hz / f_m;
        row.lcr_mc_ci = stats.lcr_ci_halfwidth_hz / f_m;
        row.afd_mc = stats.afd_s * f_m;
    }
}

void append_metadata(std::ostringstream& out, const SweepRequest& req) {
    out << "# dnak " << dnak_version() << " sweep\n";
    if (req.mode == SweepMode::keyhole) {
        out << "# mode = keyhole\n";
        out << "# tx_antennas = " << req.kh.tx_antennas << "\n";
        out << "# rx_antennas = " << req.kh.rx_antennas << "\n";
        out << "# m_t = " << fmt17(req.kh.m_tx) << "\n";
        out << "# m_r = " << fmt17(req.kh.m_rx) << "\n";
        out << "# omega_t = " << fmt17(req.kh.omega_tx) << "\n";
        out << "# omega_r = " << fmt17(req.kh.omega_rx) << "\n";
        out << "# f_alpha = " << fmt17(req.kh.doppler_tx_hz) << "\n";
        out << "# f_beta = " << fmt17(req.kh.doppler_rx_hz) << "\n";
        out << "# stbc_rate = " << fmt17(req.kh.stbc_rate) << "\n";
        out << "# avg_snr = " << fmt17(req.kh.avg_snr) << "\n";
        dnak_double_nakagami_params mapped{};
        dnak_keyhole_equivalent_params(&req.kh, &mapped);
        out << "# mapped_m_x = " << fmt17(mapped.x_branch.m) << "\n";
        out << "# mapped_omega_x = " << fmt17(mapped.x_branch.omega) << "\n";
        out << "# mapped_m_y = " << fmt17(mapped.y_branch.m) << "\n";
        out << "# mapped_omega_y = " << fmt17(mapped.y_branch.omega) << "\n";
        out << "# z_linear column = instantaneous output SNR threshold (linear)\n";
    } else {
        out << "# mode = double\n";
        out << "# m_x = " << fmt17(req.dn.x_branch.m) << "\n";
        out << "# omega_x = " << fmt17(req.dn.x_branch.omega) << "\n";
        out << "# f_mx = " << fmt17(req.dn.x_branch.doppler_hz) << "\n";
        out << "# m_y = " << fmt17(req.dn.y_branch.m) << "\n";
        out << "# omega_y = " << fmt17(req.dn.y_branch.omega) << "\n";
        out << "# f_my = " << fmt17(req.dn.y_branch.doppler_hz) << "\n";
        out << "# z_linear column = product-process threshold z\n";
    }
    out << "# grid_min_db = " << fmt17(req.grid_min_db) << "\n";
    out << "# grid_max_db = " << fmt17(req.grid_max_db) << "\n";
    out << "# grid_points = " << req.grid_points << "\n";
    out << "# methods =";
    if (req.methods & kMethodExact) out << " exact";
    if (req.methods & kMethodLaplace) out << " laplace";
    if (req.methods & kMethodMonteCarlo) out << " montecarlo";
    out << "\n";
    out << "# quad_abs_tol = " << fmt17(req.quad.abs_tol) << "\n";
    out << "# quad_rel_tol = " << fmt17(req.quad.rel_tol) << "\n";
    out << "# quad_max_subdivisions = " << req.quad.max_subdivisions << "\n";
    if (req.methods & kMethodMonteCarlo) {
        out << "# mc_duration_symbols = " << req.mc_duration_symbols << "\n";
        out << "# mc_seed = " << req.mc_seed << "\n";
        out << "# mc_oscillators = " << req.mc_oscillators << "\n";
        out << "# mc_sample_rate_factor = " << fmt17(req.mc_sample_rate_factor) << "\n";
    }
    out << "# normalization_f_m_hz = " << fmt17(req.normalization_doppler_hz()) << "\n";
    out << "# lcr columns are N/f_m (dimensionless); afd columns are T*f_m\n";
}

} // namespace

std::string run_sweep(const SweepRequest& req) {
    req.validate();

    const int n = req.grid_points;
    std::vector<Row> rows(static_cast<std::size_t>(n));

    std::atomic<int> next{0};
    std::mutex fail_mutex;
    std::optional<std::pair<int, std::string>> first_failure;

    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            {
                std::lock_guard<std::mutex> lock(fail_mutex);
                if (first_failure) return;
            }
            const double db = req.grid_min_db +
                              (req.grid_max_db - req.grid_min_db) * i / (n - 1.0);
            try {
                compute_point(req, i, db, rows[static_cast<std::size_t>(i)]);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                if (!first_failure || i < first_failure->first)
                    first_failure = {i, e.what()};
            }
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_threads = std::min<unsigned>(hw, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    if (first_failure)
        throw ComputationError(first_failure->second);

    std::ostringstream out;
    append_metadata(out, req);
    out << "threshold_db,z_linear,lcr_exact,lcr_laplace,lcr_mc,lcr_mc_ci,"
           "afd_exact,afd_laplace,afd_mc,cdf\n";
    auto cell = [](const std::optional<double>& v) {
        return v ? fmt17(*v) : std::string();
    };
    for (const Row& r : rows) {
        out << fmt17(r.threshold_db) << ',' << fmt17(r.z_linear) << ','
            << cell(r.lcr_exact) << ',' << cell(r.lcr_laplace) << ','
            << cell(r.lcr_mc) << ',' << cell(r.lcr_mc_ci) << ','
            << cell(r.afd_exact) << ',' << cell(r.afd_laplace) << ','
            << cell(r.afd_mc) << ',' << cell(r.cdf) << '\n';
    }
    return out.str();
}

} // namespace dnak_cli
