#pragma once

namespace bayesfuse {

inline constexpr const char* kEngineVersion = "0.1.0";

}  // namespace bayesfuse
