#pragma once

namespace legsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace legsim
