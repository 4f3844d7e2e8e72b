#pragma once

#include <cstdint>

namespace elgot {

/// Small deterministic generator (splitmix64). Self-contained so that equal
/// seeds give equal streams on every platform and build.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

    /// Uniform in [lo, hi] inclusive.
    std::uint64_t range(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

    /// Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool coin(double p = 0.5) { return unit() < p; }

private:
    std::uint64_t state_;
};

/// Stable per-trial seed derivation, recorded in reports so failures replay.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial) {
    Rng r(master ^ (0xd1b54a32d192ed03ULL * (trial + 1)));
    return r.next();
}

} // namespace elgot
