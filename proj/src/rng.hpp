#ifndef STEPUP_RNG_HPP
#define STEPUP_RNG_HPP

#include <cstdint>
#include <numeric>
#include <vector>

namespace stepup {

// Counter-based generator in the SplitMix64 family: every output is a pure
// function of (key, counter), so replication r of a run seeded with s can be
// regenerated in isolation as Rng(s, r) on any worker, in any order.
class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(mix(seed + GOLDEN) ^ mix(stream + 1))), counter_(0) {}

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * GOLDEN); }

    // Uniform on [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (lo, hi]; relies on next_double() < 1.
    double next_in(double lo, double hi) { return hi - (hi - lo) * next_double(); }

    // Integer in [0, n), n >= 1.
    std::uint64_t next_below(std::uint64_t n) {
        // Multiply-shift range reduction; bias is negligible for the n used here.
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

  private:
    static constexpr std::uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_;
};

// First k positions of a Fisher-Yates shuffle of {0,..,n-1}; consumes exactly
// k draws, so parallel consumers stay aligned.
inline std::vector<std::uint32_t> sample_indices(Rng& rng, std::uint32_t n, std::uint32_t k,
                                                 std::vector<std::uint32_t>& scratch) {
    scratch.resize(n);
    std::iota(scratch.begin(), scratch.end(), 0u);
    std::vector<std::uint32_t> out(k);
    for (std::uint32_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::uint32_t>(rng.next_below(n - i));
        std::swap(scratch[i], scratch[j]);
        out[i] = scratch[i];
    }
    return out;
}

}  // namespace stepup

#endif
