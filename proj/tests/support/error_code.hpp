#pragma once

#include <functional>

#include "dxeval/error.hpp"

/// The ErrorCode `f` throws, or Internal when it returns normally.
inline dxeval::ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const dxeval::Error& e) {
    return e.code();
  }
  return dxeval::ErrorCode::Internal;
}
