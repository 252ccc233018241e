#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>

#include "hyerslab/types.hpp"

namespace hyerslab {

// Deterministic, platform-independent PRNG built on splitmix64.
// std::mt19937 + <random> distributions are avoided on purpose: their
// outputs are implementation-defined and would break byte-identical reports.

inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline uint64_t hash_combine(uint64_t h, uint64_t v) {
    uint64_t s = h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
    return splitmix64(s);
}

inline uint64_t double_bits(double d) {
    uint64_t b;
    std::memcpy(&b, &d, sizeof b);
    return b;
}

class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {
        // warm up so nearby seeds decorrelate
        splitmix64(state_);
        splitmix64(state_);
    }

    /// Independent stream for sample #index under a base seed; makes
    /// sampling loops order- and schedule-independent.
    static Rng substream(uint64_t seed, uint64_t index) {
        uint64_t s = hash_combine(seed, index);
        return Rng(s);
    }

    uint64_t next_u64() { return splitmix64(state_); }

    /// uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

    /// uniform in (0, 1]
    double uniform_pos() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53; }

    /// standard normal via Box-Muller
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform_pos();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    cx gaussian_complex() {
        double re = gaussian();
        double im = gaussian();
        return cx(re, im);
    }

    /// log-uniform in [lo, hi], lo > 0
    double log_uniform(double lo, double hi) {
        return lo * std::exp(uniform() * std::log(hi / lo));
    }

  private:
    uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0;
};

}  // namespace hyerslab
