// Fixed float formatting shared by every CSV/JSON writer.
#pragma once

#include <cstdio>
#include <string>

namespace cjoint {

/// 9 significant digits in scientific notation, e.g. 5.83425314e-01.
inline std::string fmt_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.8e", v);
    return buf;
}

} // namespace cjoint
