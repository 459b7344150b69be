#pragma once

namespace repump {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace repump
