#pragma once

namespace wbi {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace wbi
