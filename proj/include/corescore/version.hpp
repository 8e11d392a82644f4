#pragma once

namespace corescore {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace corescore
