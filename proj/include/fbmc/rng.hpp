#ifndef FBMC_RNG_HPP
#define FBMC_RNG_HPP

#include "fbmc/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace fbmc {

/// splitmix64; used to derive independent stream seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic random stream. Uniform and Gaussian variates are derived
/// from raw mt19937_64 output only, so sequences are identical on every
/// platform (std::normal_distribution is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() { // in (0, 1]
        return (double((engine_() >> 11)) + 1.0) * 0x1p-53;
    }

    double bpsk() { return (engine_() & 1u) ? 1.0 : -1.0; }

    /// Standard normal via Box-Muller.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

    /// Circular complex Gaussian, E|z|^2 = 1.
    cplx cgaussian() {
        return cplx(gaussian(), gaussian()) * 0.7071067811865475244;
    }

    /// Unit-power QPSK symbol.
    cplx qpsk() {
        return cplx(bpsk(), bpsk()) * 0.7071067811865475244;
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace fbmc

#endif
