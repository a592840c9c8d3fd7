#pragma once

namespace hypernorden {

inline constexpr const char* kEngineName = "hypernorden";
inline constexpr const char* kEngineVersion = "0.1.0";

}  // namespace hypernorden
