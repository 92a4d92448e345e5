#pragma once

namespace ricci {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace ricci
