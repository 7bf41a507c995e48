#pragma once

namespace stbclab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace stbclab
