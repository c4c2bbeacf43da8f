#pragma once

#include <cstdint>
#include <vector>

namespace hampack {

/// splitmix64 step; also used as the mixing function for seed derivation.
inline std::uint64_t mix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic substream derivation: independent streams are obtained by
/// folding a stream tag and an index into the master seed. Substreams keyed
/// by stable ids (edge rank, instance id) make results independent of
/// iteration order and of the worker count.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0) {
    std::uint64_t s = master;
    std::uint64_t a = mix64(s) ^ stream;
    std::uint64_t b = mix64(a) ^ index;
    return mix64(b);
}

namespace streams {
// Fixed tags, one per randomized stage.
inline constexpr std::uint64_t kEdgePresence = 0x48504b4745444745ULL;
inline constexpr std::uint64_t kScheme = 0x48504b534348454dULL;
inline constexpr std::uint64_t kLabel = 0x48504b4c4142454cULL;
inline constexpr std::uint64_t kHamilton = 0x48504b48414d494cULL;
inline constexpr std::uint64_t kAudit = 0x48504b4155444954ULL;
inline constexpr std::uint64_t kGraphGen = 0x48504b4752415048ULL;
} // namespace streams

/// Small deterministic generator (splitmix64). Not crypto; plenty for
/// reproducible sampling and shuffles.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() { return mix64(state_); }

    /// Uniform in [0,1) with 53 bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Unbiased uniform in [0, bound) via rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

    /// Fisher-Yates.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

} // namespace hampack
