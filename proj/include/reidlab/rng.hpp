#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace reidlab {

/// Counter-free splitmix64 stream. Small state, stable output across
/// platforms, good enough statistical quality for permutation sampling.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Unbiased draw from [0, bound) by rejection.
    std::uint64_t bounded(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

  private:
    std::uint64_t state_;
};

/// FNV-1a over the key string, then mixed with the numeric parts through
/// splitmix64 steps. Stable across platforms and runs.
std::uint64_t stable_seed(std::uint64_t base_seed, std::uint64_t run_index,
                          std::string_view key);

/// In-place Fisher-Yates with the given stream; uniform over permutations.
template <typename T>
void shuffle(std::vector<T>& v, SplitMix64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.bounded(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace reidlab
