#pragma once

#include <string>

#include <gtest/gtest.h>

/// Expects `expr` to throw E with `needle` in its message.
#define EXPECT_THROW_MSG(expr, E, needle)                                        \
  do {                                                                            \
    try {                                                                         \
      (void)(expr);                                                               \
      ADD_FAILURE() << "no exception from " #expr;                                \
    } catch (const E& e) {                                                        \
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what(); \
    }                                                                             \
  } while (0)
