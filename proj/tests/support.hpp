#pragma once

#include <string>

#include "hcolor/common.hpp"

// Runs `expr` and returns the code of the hcolor::Error it throws ("" if none).
#define ERROR_CODE(expr)                         \
  ([&]() -> std::string {                        \
    try {                                        \
      (void)(expr);                              \
    } catch (const hcolor::Error& e__) {         \
      return e__.code();                         \
    }                                            \
    return "";                                   \
  }())
