#pragma once

#include <cstdint>

namespace ergolab {

// splitmix64 finalizer. Used wherever the library needs a reproducible
// pseudo-random 64-bit value keyed by integers: i.i.d. coordinate bits,
// per-batch seeds, grid starts. Fixed forever; outputs are part of the
// byte-determinism contract.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ mix64(b));
}

// Stateful stream over mix64, one value per call.
class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
    // Uniform in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        return n == 0 ? 0 : next() % n;
    }

private:
    std::uint64_t state_;
};

} // namespace ergolab
