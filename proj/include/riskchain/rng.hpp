#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace riskchain {

/// Seeded deterministic random source.
///
/// The engine is std::mt19937_64, whose raw output sequence is fixed by the
/// standard, and every distribution transform below is implemented here with
/// an explicit algorithm, so a given seed produces the same draws on every
/// platform and standard library. Never use std::*_distribution with this
/// class: those are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of randomness.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound). Masked rejection, no modulo bias.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        std::uint64_t mask = ~std::uint64_t{0};
        mask >>= std::countl_zero(bound - 1);
        for (;;) {
            std::uint64_t v = engine_() & mask;
            if (v < bound) return v;
        }
    }

    /// Uniform integer in [lo, hi], inclusive on both ends.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(
                        next_below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool next_bool() { return (engine_() >> 63) != 0; }

    /// Exponential with the given mean (inverse-CDF transform).
    double next_exponential(double mean) {
        double u = next_double();
        return -mean * std::log1p(-u);
    }

    /// Standard normal via Box-Muller; one value per call, spare cached.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    /// Lognormal parameterized by the underlying normal's mu/sigma.
    double next_lognormal(double mu, double sigma) {
        return std::exp(mu + sigma * next_normal());
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// splitmix64 step; used to derive independent per-component seeds from one
/// run seed without correlated streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t domain) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (domain + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace riskchain
