#pragma once

namespace spinstar {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace spinstar
