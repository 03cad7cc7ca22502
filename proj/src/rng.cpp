#include "reidlab/rng.hpp"

namespace reidlab {

namespace {
std::uint64_t mix(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace

std::uint64_t stable_seed(std::uint64_t base_seed, std::uint64_t run_index,
                          std::string_view key) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a offset basis
    for (unsigned char c : key) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    h = mix(h ^ mix(base_seed));
    h = mix(h ^ mix(run_index + 0x9e3779b97f4a7c15ULL));
    return h;
}

}  // namespace reidlab
