#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace hrlab {

/// Seeded random stream built on std::mt19937_64 (Mersenne Twister 19937,
/// 64-bit flavor). The engine's output sequence is fixed by the C++ standard,
/// and all value mappings (uniform double, Box-Muller normal) are implemented
/// here explicitly, so identical seeds give identical streams on every
/// platform. OS entropy is never consulted.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random mantissa bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Integer in [0, n). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n);

    /// Standard normal via the basic Box-Muller transform. One value per call,
    /// two uniforms consumed, no cached spare (keeps the stream position a
    /// simple function of the call count).
    double normal();

    double normal(double mean, double std) { return mean + std * normal(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Fork a child stream. Mixes the parent seed with the key using
    /// splitmix64 so sibling streams are decorrelated.
    Rng fork(std::uint64_t key) const;

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

/// n draws from N(mean, std^2). std must be >= 0; std == 0 yields a constant
/// sequence.
std::vector<double> gaussian_sample(Rng& rng, double mean, double std, std::size_t n);

}  // namespace hrlab
