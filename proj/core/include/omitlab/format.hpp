#pragma once

#include <cstdio>
#include <string>

namespace omit {

// Decimal with 12 significant digits, the precision used by every CSV writer.
inline std::string g12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace omit
