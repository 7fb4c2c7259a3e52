#pragma once

#include "nispin/dirac.hpp"

#include <random>

namespace testing {

using nispin::Vec3;

// Deterministic draws for the hand-rolled property tests.
struct Draws {
  std::mt19937_64 rng;
  explicit Draws(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  Vec3 vec(double bound) { return Vec3(uniform(-bound, bound), uniform(-bound, bound), uniform(-bound, bound)); }
  // Uniform in the ball |v| <= radius.
  Vec3 ball(double radius) {
    Vec3 v;
    do v = vec(1.0);
    while (v.norm() > 1.0);
    return radius * v;
  }
};

inline double max_abs(const nispin::ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing
