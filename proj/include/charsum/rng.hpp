#pragma once

#include <cstdint>

namespace charsum {

// splitmix64: counter-based mixer. Used for seeded weight families and test
// instance generation; chosen over std::mt19937 so streams are a pure
// function of (seed, counter) and identical on every platform.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stateless hash of a (seed, i, j) triple to 64 bits.
inline std::uint64_t mix3(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
    std::uint64_t h = splitmix64(seed ^ 0x8f462907235ab4d1ULL);
    h = splitmix64(h ^ i);
    h = splitmix64(h ^ (j + 0x2545f4914f6cdd1dULL));
    return h;
}

// Tiny sequential generator for tests and sweeps.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        return splitmix64(state);
    }

    // Uniform value in [0, n). n must be > 0; modulo bias is irrelevant here.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    // Uniform value in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
        return lo + below(hi - lo + 1);
    }

    double unit_real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace charsum
