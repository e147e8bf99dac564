#pragma once

#include <iomanip>
#include <sstream>
#include <string>

namespace hardedge {

/// 17 significant digits: round-trips every double.
inline std::string fmt17(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace hardedge
