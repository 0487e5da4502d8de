#include "betaest/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace betaest {
namespace {

int significant_digits(std::string_view text) {
    int digits = 0;
    bool leading = true;
    for (char c : text) {
        if (c == 'e' || c == 'E') break;
        if (c < '0' || c > '9') continue;
        if (leading && c == '0') continue;
        leading = false;
        ++digits;
    }
    return digits;
}

}  // namespace

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    std::string_view shortest(buf.data(), static_cast<std::size_t>(res.ptr - buf.data()));
    if (significant_digits(shortest) <= 9) return std::string(shortest);
    res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 9);
    return std::string(buf.data(), res.ptr);
}

}  // namespace betaest
