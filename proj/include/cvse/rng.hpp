#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace cvse::rng {

// Counter-based generator built on the splitmix64 finalizer. A stream is
// identified by (seed, stream_id); draw t of a stream is
//
//   finalize(derive(seed, stream_id) + (t+1) * GAMMA)
//
// with GAMMA = 0x9E3779B97F4A7C15 and finalize the standard splitmix64 mixer.
// Streams are independent of the order in which they are consumed, which is
// what makes per-repetition and per-trial substreams reproducible under
// concurrency. Integer-only pipeline, so sequences are identical on every
// platform.

inline constexpr std::uint64_t GAMMA = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t stream_id) {
    return finalize(seed + GAMMA) ^ finalize(stream_id * GAMMA + 0x1D8E4E27C47D124FULL);
}

class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream_id)
        : base_(derive(seed, stream_id)) {}

    std::uint64_t next_u64() { return finalize(base_ + (++counter_) * GAMMA); }

    /// Uniform double in the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Unbiased integer in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x < limit) return x % bound;
        }
    }

    /// Standard normal via Box-Muller; the paired value is cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    /// Fisher-Yates shuffle.
    void shuffle(std::vector<int>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace cvse::rng
