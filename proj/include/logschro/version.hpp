#pragma once

namespace logschro {

inline constexpr const char* version = "0.1.0";

}  // namespace logschro
