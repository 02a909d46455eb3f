#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace den {

/// splitmix64 step; used to derive independent stream seeds from
/// (seed, sample_id, tag) tuples.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = seed;
    splitmix64(s);
    s ^= a * 0x9e3779b97f4a7c15ULL;
    splitmix64(s);
    s ^= b * 0xd1b54a32d192ed03ULL;
    return splitmix64(s);
}

/// Abstract draw source for the random-field sampler. Tests substitute a
/// stub to force degenerate coefficient draws.
class RandomStream {
public:
    virtual ~RandomStream() = default;
    /// Uniform in [0, 1).
    virtual double uniform() = 0;
    /// One standard-normal pair (Box-Muller; consumes two uniforms).
    virtual void normal_pair(double& z0, double& z1) {
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        z0 = r * std::cos(2.0 * std::numbers::pi * u2);
        z1 = r * std::sin(2.0 * std::numbers::pi * u2);
    }
};

/// xoshiro-free deterministic stream: splitmix64-seeded 64-bit state with a
/// fixed 53-bit mantissa mapping. Bit-stable across platforms and standard
/// library versions, unlike std::uniform_real_distribution.
class Pcg64Stream final : public RandomStream {
public:
    explicit Pcg64Stream(std::uint64_t seed) : state_(seed) {
        // Warm up so trivially related seeds decorrelate.
        splitmix64(state_);
        splitmix64(state_);
    }
    double uniform() override {
        return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53;
    }
    std::uint64_t next_u64() { return splitmix64(state_); }

private:
    std::uint64_t state_;
};

}  // namespace den
