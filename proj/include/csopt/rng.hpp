#pragma once

#include <cmath>
#include <cstdint>

namespace csopt {

// splitmix64 step; also used as a stateless hash when deriving stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Seed for one experiment trial. Depends on (master, k, trial) only, so the
// same signal/noise draws are shared by every algorithm and solver, and
// raising the trial count leaves earlier trials untouched.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k, std::uint64_t trial) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ (k * 0xD1B54A32D192ED03ull));
    h = splitmix64(h ^ (trial * 0x8CB92BA72F3D8DD7ull));
    return h;
}

// Small deterministic generator: splitmix64 stream plus a Box-Muller normal
// with one cached value. Identical output on every platform for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // Unbiased index in [0, n); n must be nonzero.
    std::size_t uniform_index(std::size_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return static_cast<std::size_t>(x % n);
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace csopt
