#pragma once

namespace sitelink {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sitelink
