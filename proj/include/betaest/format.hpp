#pragma once

#include <string>

namespace betaest {

/// Locale-independent decimal text: the shortest round-trip representation
/// when it needs at most 9 significant digits, otherwise 9 significant digits.
std::string format_real(double v);

}  // namespace betaest
