#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace soaccept::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

void append(std::string& out, char32_t cp);

// Decodes one code point starting at text[pos] and advances pos. Invalid or
// truncated sequences yield kReplacement and consume one byte.
char32_t decode(std::string_view text, std::size_t& pos);

// Letter classification used by the tokenizer: ASCII letters, plus any
// non-ASCII code point outside the punctuation, symbol, space, control and
// private-use blocks listed in utf8.cpp.
bool is_letter(char32_t cp);

// Simple one-to-one lowercase mapping for ASCII, Latin-1, Latin Extended-A,
// Greek and Cyrillic. Other code points are returned unchanged.
char32_t to_lower(char32_t cp);

}  // namespace soaccept::utf8
