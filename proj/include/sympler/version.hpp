#pragma once

namespace sympler {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sympler
