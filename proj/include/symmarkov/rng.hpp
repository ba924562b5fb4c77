#pragma once

#include <cmath>
#include <cstdint>

namespace symmarkov {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so parallel consumers get identical values
// regardless of scheduling and ensembles are reproducible bit for bit.
namespace rng {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// One 64-bit word from stream `stream` at position `counter`.
inline std::uint64_t word(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t h = splitmix64(seed ^ 0x5851f42d4c957f2dULL);
    h = splitmix64(h ^ splitmix64(stream));
    return splitmix64(h ^ counter);
}

/// Uniform double in [0, 1) with 53-bit resolution.
inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>(word(seed, stream, counter) >> 11) * 0x1.0p-53;
}

/// Sequential convenience wrapper over the counter-based core.
class Stream {
  public:
    Stream(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

    std::uint64_t next_word() { return word(seed_, stream_, counter_++); }
    double next_uniform() { return uniform(seed_, stream_, counter_++); }

    /// Uniform integer in [0, bound) by rejection-free scaling (bound small).
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(next_uniform() * static_cast<double>(bound));
    }

    /// Uniform double in [lo, hi).
    double next_range(double lo, double hi) { return lo + (hi - lo) * next_uniform(); }

    /// Standard normal via Box-Muller; platform-independent given libm sin/cos.
    double next_normal() {
        double u1 = next_uniform();
        double u2 = next_uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

}  // namespace rng
}  // namespace symmarkov
