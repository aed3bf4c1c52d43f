#pragma once

namespace embias {

inline constexpr const char* version = "0.1.0";

}
