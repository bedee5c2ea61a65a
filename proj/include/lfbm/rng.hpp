#pragma once

#include <cstdint>

namespace lfbm {

/// SplitMix64 generator; passes BigCrush, 64-bit state, trivially seedable.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in (0,1); never returns 0 or 1.
    double uniform() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// One mixing round of SplitMix64 applied to x; used to fold stream ids
/// into a master seed so that distinct (seed, id...) tuples give
/// decorrelated generator states.
std::uint64_t mix64(std::uint64_t x);

/// Derived seed for a replicate stream. Streams for distinct tuples are
/// independent for all practical purposes and never depend on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

/// Standard normal stream via Box-Muller on SplitMix64 output.
/// Fully deterministic across platforms for a fixed seed.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

    double next();

private:
    SplitMix64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace lfbm
