#pragma once

namespace qmcrf {

inline constexpr const char* kVersion = "0.1.0";

} // namespace qmcrf
