#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "fdip/errors.hpp"

namespace fdip {

/// All durations live on an integer tick grid (1 tick = tick_ns nanoseconds,
/// default 1). Exact integer arithmetic keeps the cycle algebra drift-free.
using Ticks = std::int64_t;

constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
  // b > 0 assumed
  std::int64_t q = a / b;
  return (a % b != 0 && a < 0) ? q - 1 : q;
}

constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) noexcept {
  // b > 0 assumed
  std::int64_t q = a / b;
  return (a % b != 0 && a > 0) ? q + 1 : q;
}

/// Euclidean remainder in [0, b).
constexpr std::int64_t mod_floor(std::int64_t a, std::int64_t b) noexcept {
  std::int64_t r = a % b;
  return r < 0 ? r + b : r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out))
    throw limit_error("integer overflow in tick arithmetic: " + std::to_string(a) +
                      " * " + std::to_string(b));
  return out;
}

inline std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  std::int64_t g = std::gcd(a, b);
  return checked_mul(a / g, b);
}

} // namespace fdip
