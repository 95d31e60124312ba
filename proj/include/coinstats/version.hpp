#pragma once

namespace coinstats {

inline constexpr const char* kToolName = "coinstats";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace coinstats
