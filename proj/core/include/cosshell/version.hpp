#pragma once

namespace cosshell {

inline constexpr const char* kVersion = "0.1.0";

} // namespace cosshell
