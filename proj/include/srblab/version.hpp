#pragma once

namespace srblab {

inline constexpr const char* kVersion = "0.1.0";

} // namespace srblab
