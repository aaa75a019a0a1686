#pragma once

namespace wmt {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace wmt
