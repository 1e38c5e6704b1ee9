#pragma once

#include <string>

namespace shishkin {

/// printf-style %.<digits>g; 17 digits round-trips any double.
std::string format_g(double x, int digits = 17);

}  // namespace shishkin
