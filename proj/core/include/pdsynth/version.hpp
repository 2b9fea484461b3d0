#pragma once

namespace pdsynth {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pdsynth
