#pragma once

namespace ballop {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ballop
