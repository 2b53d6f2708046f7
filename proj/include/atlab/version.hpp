#pragma once

namespace atlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace atlab
