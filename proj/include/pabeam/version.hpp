#pragma once

namespace pabeam {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace pabeam
