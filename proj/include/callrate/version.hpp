#pragma once

namespace callrate {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace callrate
