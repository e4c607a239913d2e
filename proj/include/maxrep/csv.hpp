#pragma once

#include <string>

namespace maxrep {

// 12 significant digits, '.' decimal point, "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double value);

}  // namespace maxrep
