#pragma once

#include <string>

namespace repump {

// Fixed numeric formats so artifacts are byte-stable across runs:
// CSV columns use 9 significant digits, JSON uses full round-trip form.
std::string format_g9(double v);
std::string format_g17(double v);

}  // namespace repump
