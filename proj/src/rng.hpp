#ifndef DNAK_RNG_HPP
#define DNAK_RNG_HPP

#include <cstdint>
#include <cmath>
#include <random>

namespace dnak {

/// Deterministic random stream with cheap independent substreams.
///
/// The generator is a std::mt19937_64 whose output sequence is fixed by the
/// C++ standard, so a (seed, stream) pair reproduces the same draws on every
/// platform and build. All variate transforms are implemented here rather
/// than with std::*_distribution, whose algorithms are implementation
/// defined.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(mix(seed) ^ mix(stream + 0x9E3779B97F4A7C15ull))) {
        std::seed_seq seq{static_cast<std::uint32_t>(key_),
                          static_cast<std::uint32_t>(key_ >> 32),
                          static_cast<std::uint32_t>(mix(key_)),
                          static_cast<std::uint32_t>(mix(key_) >> 32)};
        engine_.seed(seq);
    }

    /// Independent child stream; fork(i) and fork(j) are decorrelated for i != j.
    RandomStream fork(std::uint64_t index) const {
        return RandomStream(key_, index + 1);
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via the Marsaglia polar method.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double r = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * r;
        have_spare_ = true;
        return u * r;
    }

    /// Gamma(shape, 1) via Marsaglia-Tsang squeeze, boosted for shape < 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform_open(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_open();
            if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

private:
    // uniform on (0, 1); avoids log(0)/pow(0) in the transforms above
    double uniform_open() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // SplitMix64 finalizer
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
    std::uint64_t key_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace dnak

#endif
