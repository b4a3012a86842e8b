#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace tclswarm {

/// Deterministic 64-bit generator (splitmix64).
///
/// All random draws in the project go through this class instead of the
/// standard <random> distributions, whose output is implementation
/// defined. That keeps seeded runs bit-reproducible across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi). Degenerate ranges (lo == hi) return lo.
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform index in [0, n).
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        if (v.size() < 2) return;
        for (std::size_t i = v.size() - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(next_u64() % (i + 1));
            std::swap(v[i], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

/// FNV-1a over a byte string.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Derives an independent stream seed from a master seed and a role label.
/// Subsystems (population sampling, dataset split, weight init, ...) each
/// use their own label so they stay reproducible in isolation.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
    Rng mix(master ^ fnv1a64(label));
    mix.next_u64();
    return mix.next_u64();
}

} // namespace tclswarm
