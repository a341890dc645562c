#ifndef KRECYCLE_PROBLEMS_RNG_HPP
#define KRECYCLE_PROBLEMS_RNG_HPP

/// \file krecycle/problems/rng.hpp
/// \brief Counter-based random numbers. Every draw is a pure function of
///        (seed, key...) so sequences are reproducible bit-for-bit across
///        platforms and independent of draw order.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace krecycle {

/// Name recorded in report headers.
inline constexpr const char *rng_name = "splitmix64-counter/box-muller";

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Hash of a seed and an arbitrary list of counters.
inline std::uint64_t counter_hash(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = splitmix64(seed);
    for (auto k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
    return h;
}

/// Uniform in the open interval (0, 1).
inline double to_unit_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal draw keyed by (seed, a, b, c).
inline double counter_normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) {
    const double u1 = to_unit_open(counter_hash(seed, {a, b, c, 0}));
    const double u2 = to_unit_open(counter_hash(seed, {a, b, c, 1}));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace krecycle

#endif
