#ifndef BNS_RNG_HPP
#define BNS_RNG_HPP

#include <cstdint>
#include <random>

namespace bns {

using Rng = std::mt19937_64;

// splitmix64 step (Steele, Lea, Flood). Used only to derive decorrelated
// substream seeds from (root seed, path index, stream tag); the streams
// themselves are mt19937_64.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t id1, std::uint64_t id2 = 0) {
    std::uint64_t s = root;
    std::uint64_t h = splitmix64(s);
    s ^= id1 + 0x9e3779b97f4a7c15ULL;
    h ^= splitmix64(s);
    s ^= id2 + 0xd1b54a32d192ed03ULL;
    h ^= splitmix64(s);
    return h;
}

// One independent seed per stochastic driver of a simulated path:
//   w  -> Brownian increments
//   z  -> first subordinator's jumps
//   zb -> second subordinator's jumps
//   aux -> extra driver (e.g. the hedged asset's orthogonal Brownian part)
struct StreamSeeds {
    std::uint64_t w = 0;
    std::uint64_t z = 0;
    std::uint64_t zb = 0;
    std::uint64_t aux = 0;
};

inline StreamSeeds path_stream_seeds(std::uint64_t root, std::uint64_t path_index) {
    return StreamSeeds{
        derive_seed(root, path_index, 0),
        derive_seed(root, path_index, 1),
        derive_seed(root, path_index, 2),
        derive_seed(root, path_index, 3),
    };
}

} // namespace bns

#endif
