#pragma once

#include <doctest.h>

#include <cmath>

// Absolute-tolerance comparison with a readable failure message.
#define CHECK_NEAR(a, b, tol)                                              \
  do {                                                                     \
    const double check_near_a = (a);                                       \
    const double check_near_b = (b);                                       \
    INFO("lhs = ", check_near_a, ", rhs = ", check_near_b,                 \
         ", |diff| = ", std::abs(check_near_a - check_near_b));            \
    CHECK(std::abs(check_near_a - check_near_b) <= (tol));                 \
  } while (0)

#define REQUIRE_NEAR(a, b, tol)                                            \
  do {                                                                     \
    const double check_near_a = (a);                                       \
    const double check_near_b = (b);                                       \
    INFO("lhs = ", check_near_a, ", rhs = ", check_near_b,                 \
         ", |diff| = ", std::abs(check_near_a - check_near_b));            \
    REQUIRE(std::abs(check_near_a - check_near_b) <= (tol));               \
  } while (0)
