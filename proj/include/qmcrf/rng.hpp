#pragma once

#include <cstdint>
#include <initializer_list>

namespace qmcrf::rng {

// 64-bit finalizer from SplitMix64 (Steele, Lea, Flood 2014). Bijective,
// passes BigCrush as a counter generator; we use it both as the stream
// generator and as the seed-derivation hash so that every random decision
// in the library is a pure function of (master seed, integer path).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ (splitmix64(b) + 0x9E3779B97F4A7C15ull));
}

// Derive a child seed from a master seed and an integer path, e.g.
// derive_seed(master, {kStreamBank, sampler_id, trial}). Order-sensitive.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t p : path) h = hash_combine(h, p);
    return h;
}

// Counter-based uniform stream. Cheap to construct, no shared state, so
// per-trial streams can be created inside worker threads without any
// coordination and results stay schedule-independent.
class Stream {
  public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_++); }

    // Uniform on [0,1), multiples of 2^-53.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1); safe input for quantile functions.
    double next_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

// Fixed stream tags used for seed derivation across the library/harness.
enum StreamTag : std::uint64_t {
    kStreamPairs = 1,
    kStreamBandwidth = 2,
    kStreamBank = 3,
    kStreamTrain = 4,
    kStreamNoise = 5,
    kStreamTest = 6,
    kStreamCalibration = 7,
    kStreamProbe = 8,
};

} // namespace qmcrf::rng
