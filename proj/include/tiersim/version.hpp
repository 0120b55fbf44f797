#pragma once

namespace tiersim {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace tiersim
