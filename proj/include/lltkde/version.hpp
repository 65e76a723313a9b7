#pragma once

namespace lltkde {

inline constexpr const char* version = "0.1.0";

} // namespace lltkde
