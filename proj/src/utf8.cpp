#include "utf8.hpp"

#include "error.hpp"

namespace eae::utf8 {

char32_t Next(std::string_view text, std::size_t& pos) {
  auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(text[i]);
  };
  const unsigned char lead = byte(pos);
  std::size_t len = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    len = 1;
    cp = lead;
  } else if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid UTF-8 lead byte at offset " + std::to_string(pos));
  }
  if (pos + len > text.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "truncated UTF-8 sequence at offset " + std::to_string(pos));
  }
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned char cont = byte(pos + i);
    if ((cont & 0xC0) != 0x80) {
      throw Error(ErrorCode::kInvalidArgument,
                  "invalid UTF-8 continuation at offset " +
                      std::to_string(pos + i));
    }
    cp = (cp << 6) | (cont & 0x3F);
  }
  pos += len;
  return cp;
}

void Append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::vector<std::size_t> Boundaries(std::string_view text) {
  std::vector<std::size_t> out;
  out.reserve(text.size() + 1);
  std::size_t pos = 0;
  while (pos < text.size()) {
    out.push_back(pos);
    Next(text, pos);
  }
  out.push_back(text.size());
  return out;
}

std::size_t Length(std::string_view text) {
  return Boundaries(text).size() - 1;
}

std::string Substr(std::string_view text, std::size_t begin, std::size_t end) {
  const auto bounds = Boundaries(text);
  const std::size_t n = bounds.size() - 1;
  if (begin > end || end > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "span [" + std::to_string(begin) + "," + std::to_string(end) +
                    ") outside text of length " + std::to_string(n));
  }
  return std::string(text.substr(bounds[begin], bounds[end] - bounds[begin]));
}

bool IsSpace(char32_t cp) {
  switch (cp) {
    case U' ':
    case U'\t':
    case U'\n':
    case U'\r':
    case U'\v':
    case U'\f':
    case 0x00A0:
    case 0x200B:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool IsPunct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  return cp == 0x060C || cp == 0x061B || cp == 0x061F || cp == 0x06D4 ||
         cp == 0x00AB || cp == 0x00BB;
}

std::string NormalizeWhitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = Next(text, pos);
    if (IsSpace(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    Append(out, cp);
  }
  return out;
}

bool IsWhitespaceNormalized(std::string_view text) {
  return NormalizeWhitespace(text) == text;
}

}  // namespace eae::utf8
