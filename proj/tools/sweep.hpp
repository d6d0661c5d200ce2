#ifndef DNAK_TOOLS_SWEEP_HPP
#define DNAK_TOOLS_SWEEP_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "dnak/dnak.h"

namespace dnak_cli {

// exit code 2
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// exit code 3
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SweepMode { double_nakagami, keyhole };

enum MethodFlags : unsigned {
    kMethodExact = 1u,
    kMethodLaplace = 2u,
    kMethodMonteCarlo = 4u,
};

/// One threshold sweep: the process parameters, a normalized-dB grid, the
/// requested methods, and the Monte Carlo budget.
struct SweepRequest {
    SweepMode mode = SweepMode::double_nakagami;

    dnak_double_nakagami_params dn{{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
    dnak_keyhole_config kh{1, 1, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};

    double grid_min_db = -30.0;
    double grid_max_db = 10.0;
    int grid_points = 41;

    unsigned methods = kMethodExact | kMethodLaplace;

    std::uint64_t mc_duration_symbols = 1000000;
    std::uint64_t mc_seed = 1;
    int mc_oscillators = 32;
    double mc_sample_rate_factor = 64.0;

    dnak_quad_spec quad{1e-12, 1e-10, 200};

    void validate() const; // throws ConfigurationError

    /// Doppler shift used for axis normalization: the largest branch shift.
    double normalization_doppler_hz() const;
};

/// Strict key = value parser; '#' starts a comment. Unknown keys, duplicate
/// keys and malformed values are ConfigurationErrors carrying line numbers.
SweepRequest parse_config_text(const std::string& text, SweepMode mode,
                               const std::string& origin);
SweepRequest parse_config_file(const std::string& path, SweepMode mode);

/// Comma-separated subset of {exact, laplace, montecarlo} -> method mask.
unsigned parse_methods_list(const std::string& csv);

/// Runs the sweep and renders the CSV table (leading '#' metadata block,
/// header row, one row per grid point). Grid points are evaluated
/// concurrently; Monte Carlo substreams are derived from
/// (mc_seed, point index) so the output is byte-reproducible.
std::string run_sweep(const SweepRequest& req);

} // namespace dnak_cli

#endif
