#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ppsl {

/// SplitMix64 finalizer. Used only to turn (seed, substream) pairs into
/// well-separated generator keys.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t substream) noexcept {
    return mix64(mix64(seed) ^ mix64(substream ^ 0xD1B54A32D192ED03ULL));
}

/// Deterministic source of uniform variates.
///
/// A stream is identified by (seed, substream). Its key is derived by hashing,
/// so any number of independent substreams (one per node, one per ensemble
/// member) can be created without shared state. The underlying engine is
/// std::mt19937_64, whose output sequence is fixed by the standard; variates
/// are converted from raw bits here rather than through <random>
/// distributions, which are implementation-defined.
///
/// A single stream is not safe to draw from concurrently.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t substream)
        : seed_(seed), substream_(substream), engine_(stream_key(seed, substream)) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t substream() const noexcept { return substream_; }

    /// Child stream, independent of this one and of every sibling.
    RandomStream split(std::uint64_t child) const {
        return RandomStream(stream_key(seed_, substream_), child);
    }

    std::uint64_t bits() { return engine_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [-1, 1).
    double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

    /// Fair coin on {-1, +1}.
    int coin() { return (engine_() >> 63) ? 1 : -1; }

    /// Exponential waiting time with the given mean.
    double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

private:
    std::uint64_t seed_;
    std::uint64_t substream_;
    std::mt19937_64 engine_;
};

}  // namespace ppsl
