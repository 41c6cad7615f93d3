// SplitMix64-based random source. Everything random in the project goes
// through this so that a run is reproducible from a single 64-bit seed and
// independent streams can be split off for parallel work without overlap.
#pragma once

#include <cmath>
#include <cstdint>

namespace epr {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Uniform in (0, 1); never returns exactly 0 so log() is safe.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    // Standard normal via Box-Muller, spare value cached.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    // Child generator for an independent stream. Derived from the original
    // seed, not the current state, so stream layout does not depend on how
    // much the parent has been consumed.
    Rng stream(std::uint64_t stream_id) const {
        return Rng(mix64(seed_ ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1))));
    }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace epr
