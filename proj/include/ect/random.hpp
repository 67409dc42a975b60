#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ect {

// splitmix64 stream. Small, seedable with any 64-bit value, and identical on
// every platform, which std::normal_distribution is not.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1].
    double uniform_open0() noexcept {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform in [0, 1).
    double uniform() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) noexcept {
        return bound == 0 ? 0 : next() % bound;
    }

private:
    std::uint64_t state_;
};

// Standard normals by Box-Muller, two per draw of the underlying stream.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) noexcept : rng_(seed) {}

    double next() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(rng_.uniform_open0()));
        const double angle = 2.0 * std::numbers::pi * rng_.uniform();
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    SplitMix64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Fixed mixer for deriving per-trial seeds from a suite seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    SplitMix64 rng(seed ^ (index * 0xd1b54a32d192ed03ULL));
    return rng.next();
}

}  // namespace ect
