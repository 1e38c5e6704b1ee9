#include "shishkin/format.hpp"

#include <cstdio>

namespace shishkin {

std::string format_g(double x, int digits) {
    char buf[64];
    const int len = std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return std::string(buf, static_cast<std::size_t>(len));
}

}  // namespace shishkin
