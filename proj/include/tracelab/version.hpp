#pragma once

namespace tracelab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tracelab
