#pragma once

#include <string>

namespace qam {

/// Shortest text that reads back as the same double; "nan", "inf" and
/// "-inf" for non-finite values.
std::string format_double(double x);

}  // namespace qam
