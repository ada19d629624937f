#pragma once

namespace oilcast {

inline constexpr const char* kVersion = "0.1.0";

} // namespace oilcast
