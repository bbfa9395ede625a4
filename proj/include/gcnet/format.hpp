#pragma once

#include <string>

namespace gcnet {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace gcnet
