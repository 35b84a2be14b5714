#include "hrlab/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hrlab {

std::uint64_t Rng::uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double Rng::normal() {
    // uniform() can return exactly 0; log needs a positive argument.
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace

Rng Rng::fork(std::uint64_t key) const {
    return Rng(splitmix64(seed_ ^ splitmix64(key)));
}

std::vector<double> gaussian_sample(Rng& rng, double mean, double std, std::size_t n) {
    if (std < 0.0) throw std::invalid_argument("gaussian_sample: negative std");
    std::vector<double> out(n);
    for (auto& v : out) v = std == 0.0 ? mean : rng.normal(mean, std);
    return out;
}

}  // namespace hrlab
