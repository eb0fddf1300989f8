#pragma once

#include <cstdint>

namespace splitkit {

/// SplitMix64. Used everywhere randomness is needed so that seeded runs are
/// reproducible bit-for-bit across platforms (libstdc++ distributions are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Derives an independent stream, e.g. one per search start.
    static Rng stream(std::uint64_t seed, std::uint64_t stream_id)
    {
        Rng mix(seed);
        std::uint64_t a = mix.next();
        Rng mix2(stream_id + 0x632BE59BD9B4E019ull);
        return Rng(a ^ mix2.next());
    }

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi], inclusive.
    long uniform_int(long lo, long hi)
    {
        return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::uint64_t state_;
};

} // namespace splitkit
