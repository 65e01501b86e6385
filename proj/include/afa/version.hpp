#pragma once

namespace afa {

inline constexpr const char* version_string = "afa 0.1.0";

} // namespace afa
