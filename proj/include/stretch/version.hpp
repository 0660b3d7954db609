#pragma once

namespace stretch {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace stretch
