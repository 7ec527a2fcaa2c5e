#pragma once

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "vicinal/core.hpp"
#include "vicinal/error.hpp"

namespace testing {

// Fixed seed so failures reproduce.
inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline std::vector<double> random_positive(std::size_t n, double lo = 0.3, double hi = 1.5) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng());
  return v;
}

inline std::vector<double> random_values(std::size_t n, double lo = -1.0, double hi = 1.0) {
  return random_positive(n, lo, hi);
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline std::vector<double> sine_mode(std::size_t n, int k) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(2.0 * std::numbers::pi * k * static_cast<double>(i) / static_cast<double>(n));
  return v;
}

}  // namespace testing

#define CHECK_THROWS_KIND(expr, expected_kind)                         \
  do {                                                                 \
    bool thrown_ = false;                                              \
    try {                                                              \
      (void)(expr);                                                    \
    } catch (const vicinal::Error& e_) {                               \
      thrown_ = true;                                                  \
      CHECK_MESSAGE(e_.kind() == (expected_kind), e_.what());          \
    }                                                                  \
    CHECK_MESSAGE(thrown_, "expected vicinal::Error from " #expr);     \
  } while (0)
