#pragma once

#include <cstdio>
#include <string>

namespace ampsim {

/// Shortest form that round-trips a double (17 significant digits).
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace ampsim
