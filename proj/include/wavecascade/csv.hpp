#pragma once

#include <cstdio>
#include <string>

namespace wavecascade {

/// full round-trip precision, locale-independent
inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace wavecascade
