#pragma once

namespace plateau {
inline constexpr const char* kVersion = "0.1.0";
}
