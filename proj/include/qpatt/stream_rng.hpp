// Keyed random streams: one independent, reproducible generator per
// (seed, domain, index) triple, so simulations are identical no matter how
// work is scheduled across threads.
#pragma once

#include <cstdint>
#include <random>

namespace qpatt {

// Stream domains keep logically distinct noise sources independent even
// under the same user seed.
namespace rng_domain {
inline constexpr std::uint64_t bob_channel = 0xb01;
inline constexpr std::uint64_t eve_channel = 0xe7e;
inline constexpr std::uint64_t subset_select = 0x5e1;
inline constexpr std::uint64_t repetition = 0x4e9;
inline constexpr std::uint64_t dataset = 0xda7;
} // namespace rng_domain

std::uint64_t splitmix64(std::uint64_t x);

// 64-bit key from the triple; collisions across distinct triples are as
// unlikely as splitmix64 allows.
std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t domain, std::uint64_t index);

class StreamRng {
  public:
    StreamRng(std::uint64_t seed, std::uint64_t domain, std::uint64_t index)
        : engine_(derive_stream_key(seed, domain, index)) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1) with the full 53-bit mantissa; bit-exact across
    // platforms, unlike the standard distributions
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // unbiased uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n);

  private:
    std::mt19937_64 engine_;
};

} // namespace qpatt
