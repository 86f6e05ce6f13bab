#pragma once

namespace tvn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tvn
