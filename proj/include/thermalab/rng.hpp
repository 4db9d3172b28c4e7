#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace thermalab {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Substream seed derived from a master seed and two counters (typically the
// sample index and the window index). Sampling therefore never depends on
// thread scheduling: every (sample, window) pair owns a fixed stream.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = master;
    splitmix64(s);
    s ^= 0xd1342543de82ef95ull * (a + 1);
    splitmix64(s);
    s ^= 0xaf251af3b0f025b5ull * (b + 1);
    return splitmix64(s);
}

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    std::uint64_t bits() { return gen_(); }

    // Standard complex normal with E|z|^2 = 1.
    std::complex<double> gaussian_complex() {
        double u = uniform01();
        double v = uniform01();
        double r = std::sqrt(-std::log1p(-u));
        double th = 2.0 * M_PI * v;
        return {r * std::cos(th), r * std::sin(th)};
    }

    // Standard real normal (Box-Muller, pair cached).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = uniform01();
        double v = uniform01();
        double r = std::sqrt(-2.0 * std::log1p(-u));
        double th = 2.0 * M_PI * v;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace thermalab
