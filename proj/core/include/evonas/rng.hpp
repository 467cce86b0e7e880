#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace evonas {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; good avalanche, used to derive independent seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives a seed from a root seed and a sequence of stream tags
/// (generation index, candidate index, purpose id, ...). Evaluations keyed
/// this way are order-independent, which keeps concurrent runs reproducible.
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t s = splitmix64(root);
    for (std::uint64_t t : tags) {
        s = splitmix64(s ^ splitmix64(t + 0x632be59bd9b4e019ULL));
    }
    return s;
}

inline Rng make_rng(std::uint64_t root, std::initializer_list<std::uint64_t> tags) {
    return Rng(derive_seed(root, tags));
}

/// Stream tags for derived rng streams. Keeping them in one place avoids
/// accidental collisions between subsystems.
namespace stream {
inline constexpr std::uint64_t kInitPopulation = 1;
inline constexpr std::uint64_t kEvolution = 2;
inline constexpr std::uint64_t kGaEval = 3;
inline constexpr std::uint64_t kBiGanInit = 4;
inline constexpr std::uint64_t kBiGanIter = 5;
inline constexpr std::uint64_t kBiGanEval = 6;
inline constexpr std::uint64_t kStamp = 7;
inline constexpr std::uint64_t kDataset = 8;
inline constexpr std::uint64_t kBaselineCounts = 9;
}  // namespace stream

}  // namespace evonas
