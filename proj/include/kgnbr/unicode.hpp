#pragma once

#include <string>
#include <string_view>

namespace kgnbr::text {

// Canonical composition (NFC). Invalid UTF-8 is passed through unchanged.
std::string nfc(std::string_view s);

// Strips ASCII and Unicode whitespace from both ends.
std::string_view trim(std::string_view s);

// NFC followed by trim; the canonical form used for label comparison and exact match.
std::string canonical(std::string_view s);

std::string to_lower(std::string_view s);

// Removes leading/trailing punctuation and symbol quote characters, and surrounding whitespace.
std::string strip_punctuation(std::string_view s);

// Collapses internal whitespace runs to a single ASCII space.
std::string collapse_whitespace(std::string_view s);

bool starts_with_icase(std::string_view s, std::string_view prefix);

}  // namespace kgnbr::text
