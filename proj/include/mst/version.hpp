#pragma once

namespace mst {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mst
