#include "colavoid/random.hpp"

namespace colavoid {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index,
                          std::uint64_t sub) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
    h = splitmix64(h ^ index);
    return splitmix64(h ^ sub);
}

double standard_normal(Rng& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(rng);
}

double uniform(Rng& rng, double lo, double hi) {
    if (lo == hi) return lo;
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(rng);
}

} // namespace colavoid
