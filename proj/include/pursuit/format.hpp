#pragma once

#include <cstdio>
#include <string>

namespace pursuit {

/// Real formatted with 9 significant digits, the precision of every text export.
inline std::string fmt9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

/// `v` rounded to the value it will have after a 9-digit round trip.
inline double round9(double v) { return std::stod(fmt9(v)); }

}  // namespace pursuit
