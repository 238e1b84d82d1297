#pragma once

#include <string_view>

namespace squeeze {

// Parses quantities such as "6.283e5", "2pi*100kHz", "(2pi)100kHz", "0.3us",
// "1e4*2pi*100kHz". A literal is a product of factors separated by '*'; each
// factor is a number, "pi", "2pi", or a number with an SI-prefixed unit suffix
// (Hz, s). Unit suffixes only apply the prefix scale: "100kHz" is 1e5, the
// angular conversion is written explicitly with 2pi.
double parse_quantity(std::string_view text);

} // namespace squeeze
