// Shared helpers for the unit tests.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "helicity/vec3.hpp"

namespace helicity::test {

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

/// Seeded generator for hand-rolled property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    Vec3 vec(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }
    Vec3 unit() {
        for (;;) {
            const Vec3 v = vec(-1, 1);
            const double n = norm(v);
            if (n > 0.1 && n < 1.0) return v / n;
        }
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace helicity::test
