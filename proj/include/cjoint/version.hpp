#pragma once

namespace cjoint {

inline constexpr const char *kVersion = "0.1.0";

} // namespace cjoint
