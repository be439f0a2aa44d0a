#pragma once

namespace idslab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace idslab
