#pragma once

namespace ggmdl {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace ggmdl
