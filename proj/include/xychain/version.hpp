#pragma once

namespace xychain {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace xychain
