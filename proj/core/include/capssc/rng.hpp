#pragma once

#include <cstdint>
#include <random>

#include "capssc/point.hpp"

namespace capssc {

// Radical-inverse (Halton) low-discrepancy sequence; deterministic probe
// placement for certification suites.
inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base);
    double f = inv, v = 0.0;
    while (i > 0) {
        v += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return v;
}

inline vec2 halton2(std::uint64_t i) { return {radical_inverse(i, 2), radical_inverse(i, 3)}; }

inline std::mt19937_64 seeded_engine(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace capssc
