#pragma once

#include <cstdint>
#include <cmath>
#include <initializer_list>
#include <optional>

namespace symstat {

// Counter-based random stream. The generator for a (seed, path) pair is
// splitmix64 started from a state derived by hashing the seed and each
// path word in order:
//
//   state0 = mix(seed); for each word w: state0 = mix(state0 ^ mix(w + SALT))
//   output_i = mix_output(state0 + (i+1) * GOLDEN)
//
// where mix is the splitmix64 finalizer. Two streams whose paths differ in
// any word are statistically independent, and the same (seed, path) gives
// the same sequence on every platform. Used throughout to give each
// (scenario, n, replication) its own stream.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {}) {
        state_ = mix(seed);
        for (std::uint64_t w : path) {
            state_ = mix(state_ ^ mix(w + kSalt));
        }
        origin_ = state_;
    }

    // Child stream: equivalent to appending `word` to this stream's path
    // at construction time (independent of how much has been drawn).
    RngStream split(std::uint64_t word) const {
        RngStream child;
        child.state_ = mix(origin_ ^ mix(word + kSalt));
        child.origin_ = child.state_;
        return child;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = state_ + (++counter_) * kGolden;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1]; safe as input to log().
    double next_double_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the paired draw is cached.
    double next_normal() {
        if (cached_normal_) {
            double z = *cached_normal_;
            cached_normal_.reset();
            return z;
        }
        double u1 = next_double_open();
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        cached_normal_ = r * std::sin(a);
        return r * std::cos(a);
    }

private:
    RngStream() = default;

    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
    static constexpr std::uint64_t kSalt = 0xd1b54a32d192ed03ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z += kGolden;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0;
    std::uint64_t origin_ = 0;
    std::uint64_t counter_ = 0;
    std::optional<double> cached_normal_;
};

}  // namespace symstat
