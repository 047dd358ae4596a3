#pragma once

namespace acd {

inline constexpr const char* kToolName = "acdetect";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace acd
