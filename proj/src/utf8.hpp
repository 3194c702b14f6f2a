#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace eae::utf8 {

// Byte offset of every code point boundary in `text`, including text.size()
// as the final entry. Throws on invalid UTF-8.
std::vector<std::size_t> Boundaries(std::string_view text);

// Number of code points.
std::size_t Length(std::string_view text);

// Substring over code point offsets [begin, end).
std::string Substr(std::string_view text, std::size_t begin, std::size_t end);

// Decodes one code point starting at text[pos]; advances pos.
char32_t Next(std::string_view text, std::size_t& pos);

void Append(std::string& out, char32_t cp);

bool IsSpace(char32_t cp);

// Punctuation in ASCII plus the Arabic comma, semicolon, question mark and
// full stop.
bool IsPunct(char32_t cp);

// Collapses whitespace runs to a single ASCII space and trims both ends.
std::string NormalizeWhitespace(std::string_view text);

bool IsWhitespaceNormalized(std::string_view text);

}  // namespace eae::utf8
