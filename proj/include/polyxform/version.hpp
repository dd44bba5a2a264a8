#pragma once

namespace polyxform {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace polyxform
