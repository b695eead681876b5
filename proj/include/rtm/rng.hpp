#ifndef RTM_RNG_HPP
#define RTM_RNG_HPP

// Counter-based generator: every draw is a pure function of (seed, counter),
// so noise realizations are bit-reproducible regardless of evaluation order
// or worker count.

#include <cstdint>

namespace rtm {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// uniform in (0,1], distinct streams per counter
inline double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t r = splitmix64(splitmix64(seed ^ 0x5851f42d4c957f2dULL) + counter);
    return (static_cast<double>(r >> 11) + 1.0) * (1.0 / 9007199254740992.0);
}

// standard normal pair via Box-Muller from counters (2*idx, 2*idx+1)
inline void counter_gaussian_pair(std::uint64_t seed, std::uint64_t idx, double& g1, double& g2) {
    const double u1 = counter_uniform(seed, 2 * idx);
    const double u2 = counter_uniform(seed, 2 * idx + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    g1 = r * std::cos(2.0 * 3.14159265358979323846 * u2);
    g2 = r * std::sin(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace rtm

#endif
