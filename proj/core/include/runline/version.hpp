#pragma once

namespace runline {

inline constexpr const char* kToolName = "runline-lab";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace runline
