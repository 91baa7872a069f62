#pragma once

namespace hysim {
inline constexpr const char* kVersion = "0.1.0";
}
