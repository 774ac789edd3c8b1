// Copyright 2026 The EduVerba Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eduverba/text.hpp"

#include <locale.h>
#include <wctype.h>

#include "eduverba/error.hpp"

namespace eduverba {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyConfig: return "EmptyConfig";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::UnboundPlaceholder: return "UnboundPlaceholder";
    case Errc::SourceUnavailable: return "SourceUnavailable";
    case Errc::UnknownCategory: return "UnknownCategory";
    case Errc::PageNotFound: return "PageNotFound";
    case Errc::EndpointUnreachable: return "EndpointUnreachable";
    case Errc::AuthFailure: return "AuthFailure";
    case Errc::PortInUse: return "PortInUse";
    case Errc::CorpusUnreadable: return "CorpusUnreadable";
    case Errc::EmptyLead: return "EmptyLead";
    case Errc::EmptyContext: return "EmptyContext";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::TestTooLarge: return "TestTooLarge";
    case Errc::UnknownExample: return "UnknownExample";
    case Errc::InvalidIndex: return "InvalidIndex";
    case Errc::InvalidRating: return "InvalidRating";
    case Errc::NoEntries: return "NoEntries";
    case Errc::WordTooLong: return "WordTooLong";
    case Errc::NonAlphabetic: return "NonAlphabetic";
    case Errc::MalformedRecord: return "MalformedRecord";
  }
  return "Unknown";
}

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyConfig:
    case Errc::InvalidConfig:
    case Errc::UnboundPlaceholder:
      return 1;
    case Errc::SourceUnavailable:
    case Errc::UnknownCategory:
    case Errc::PageNotFound:
    case Errc::EndpointUnreachable:
    case Errc::AuthFailure:
    case Errc::PortInUse:
    case Errc::CorpusUnreadable:
      return 2;
    default:
      return 3;
  }
}

}  // namespace eduverba

namespace eduverba::text {
namespace {

locale_t utf8_locale() {
  static const locale_t loc = [] {
    locale_t l = newlocale(LC_CTYPE_MASK, "C.UTF-8", static_cast<locale_t>(0));
    if (l == static_cast<locale_t>(0)) l = newlocale(LC_CTYPE_MASK, "en_US.UTF-8", static_cast<locale_t>(0));
    return l;
  }();
  return loc;
}

bool have_locale() { return utf8_locale() != static_cast<locale_t>(0); }

}  // namespace

char32_t decode_next(std::string_view s, std::size_t& pos) noexcept {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + extra >= s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (int i = 1; i <= extra; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += extra + 1;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
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

std::u32string to_u32(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) out.push_back(decode_next(s, pos));
  return out;
}

std::string to_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) append_utf8(out, cp);
  return out;
}

bool is_letter(char32_t cp) noexcept {
  if (cp < 0x80) return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  if (have_locale()) return iswalpha_l(static_cast<wint_t>(cp), utf8_locale()) != 0;
  // Without a UTF-8 locale accept the Latin-1/Latin Extended letter blocks.
  return (cp >= 0xC0 && cp <= 0x24F && cp != 0xD7 && cp != 0xF7);
}

bool is_alnum(char32_t cp) noexcept {
  if (cp < 0x80) return is_letter(cp) || (cp >= '0' && cp <= '9');
  if (have_locale()) return iswalnum_l(static_cast<wint_t>(cp), utf8_locale()) != 0;
  return is_letter(cp);
}

bool is_upper(char32_t cp) noexcept {
  if (cp < 0x80) return cp >= 'A' && cp <= 'Z';
  if (have_locale()) return iswupper_l(static_cast<wint_t>(cp), utf8_locale()) != 0;
  return false;
}

bool is_space(char32_t cp) noexcept {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' ||
         cp == 0xA0 || cp == 0x2009 || cp == 0x200A || cp == 0x202F || cp == 0x3000;
}

char32_t to_lower(char32_t cp) noexcept {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
  if (have_locale()) return static_cast<char32_t>(towlower_l(static_cast<wint_t>(cp), utf8_locale()));
  return cp;
}

char32_t to_upper(char32_t cp) noexcept {
  if (cp < 0x80) return (cp >= 'a' && cp <= 'z') ? cp - 32 : cp;
  if (have_locale()) return static_cast<char32_t>(towupper_l(static_cast<wint_t>(cp), utf8_locale()));
  return cp;
}

std::string lowercase(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) append_utf8(out, to_lower(decode_next(s, pos)));
  return out;
}

std::string uppercase(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) append_utf8(out, to_upper(decode_next(s, pos)));
  return out;
}

std::string_view trim(std::string_view s) noexcept {
  auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

std::string normalize_space(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t start = pos;
    const char32_t cp = decode_next(s, pos);
    if (is_space(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.append(s.substr(start, pos - start));
  }
  return out;
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  std::size_t word_start = std::string_view::npos;
  while (pos < s.size()) {
    const std::size_t start = pos;
    const char32_t cp = decode_next(s, pos);
    if (is_space(cp)) {
      if (word_start != std::string_view::npos) {
        out.push_back(s.substr(word_start, start - word_start));
        word_start = std::string_view::npos;
      }
    } else if (word_start == std::string_view::npos) {
      word_start = start;
    }
  }
  if (word_start != std::string_view::npos) out.push_back(s.substr(word_start));
  return out;
}

std::size_t word_count(std::string_view s) { return split_whitespace(s).size(); }

std::size_t letter_count(std::string_view s) {
  std::size_t n = 0;
  std::size_t pos = 0;
  while (pos < s.size()) n += is_letter(decode_next(s, pos)) ? 1 : 0;
  return n;
}

bool iequals(std::string_view a, std::string_view b) { return lowercase(a) == lowercase(b); }

bool icontains(std::string_view haystack, std::string_view needle) {
  return lowercase(haystack).find(lowercase(needle)) != std::string::npos;
}

}  // namespace eduverba::text
