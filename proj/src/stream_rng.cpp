#include "qpatt/stream_rng.hpp"

namespace qpatt {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t domain, std::uint64_t index) {
    std::uint64_t key = splitmix64(seed);
    key = splitmix64(key ^ splitmix64(domain));
    key = splitmix64(key ^ splitmix64(index));
    return key;
}

std::uint64_t StreamRng::below(std::uint64_t n) {
    // rejection sampling over the top of the range to avoid modulo bias
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return v % n;
}

} // namespace qpatt
