#pragma once

#include <cmath>
#include <random>

#include "doctest.h"

namespace chiralcav::test {

inline double rel_err(double value, double reference) { return std::abs(value / reference - 1.0); }

// Fixed-seed generator for property tests.
inline std::mt19937_64& rng() {
  static thread_local std::mt19937_64 engine(0x5eed);
  return engine;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

}  // namespace chiralcav::test
