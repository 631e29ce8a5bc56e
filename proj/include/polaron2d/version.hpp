#pragma once

namespace polaron2d {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace polaron2d
