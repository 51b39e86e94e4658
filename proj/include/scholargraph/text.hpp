#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace scholargraph {

// Splits on every non-alphanumeric code point and applies simple case
// folding. Invalid UTF-8 bytes act as separators. No stemming, no stop words.
std::vector<std::string> tokenize(std::string_view text);

// Simple case folding of a whole UTF-8 string; invalid bytes are kept.
std::string casefold(std::string_view text);

bool is_alnum_codepoint(char32_t cp);
char32_t fold_codepoint(char32_t cp);

}  // namespace scholargraph
