#pragma once

namespace qtilt {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qtilt
