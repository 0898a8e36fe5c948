#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace swarmkit {

// Counter-keyed random streams. Every draw in the library comes from a
// stream whose key is a hash of (seed, run, particle, step, channel), so
// results do not depend on how work is split across threads.

constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_key(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
    return h;
}

// Satisfies UniformRandomBitGenerator, so it plugs into <random> distributions.
class KeyedStream {
public:
    using result_type = std::uint64_t;

    explicit constexpr KeyedStream(std::uint64_t key) : state_(key) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1) with 53 random bits.
    constexpr double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Reserved step tags for draws that are not tied to a time step.
inline constexpr std::uint64_t kInitTag = 0xffffffffffff0001ULL;
inline constexpr std::uint64_t kObjectiveTag = 0xffffffffffff0002ULL;
inline constexpr std::uint64_t kRunTag = 0xffffffffffff0003ULL;

}  // namespace swarmkit
