#pragma once

namespace footprint {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace footprint
