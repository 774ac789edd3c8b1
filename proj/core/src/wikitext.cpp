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

#include "eduverba/wikitext.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>

#include "eduverba/text.hpp"

namespace eduverba::wikitext {
namespace {

constexpr std::string_view kDelimiters[] = {"''", "[[", "]]", "{{", "}}", "{|", "|}", "<ref", "</", "<b>", "<!--"};

bool istarts_with(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[pos + i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i])))
      return false;
  }
  return true;
}

std::size_t ifind(std::string_view s, std::string_view needle, std::size_t from = 0) {
  for (std::size_t i = from; i + needle.size() <= s.size(); ++i) {
    if (istarts_with(s, i, needle)) return i;
  }
  return std::string_view::npos;
}

std::string remove_comments(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t open = s.find("<!--", pos);
    if (open == std::string_view::npos) {
      out.append(s.substr(pos));
      break;
    }
    out.append(s.substr(pos, open - pos));
    const std::size_t close = s.find("-->", open + 4);
    if (close == std::string_view::npos) break;
    pos = close + 3;
  }
  return out;
}

// Drops <tag ...>...</tag> blocks (and self-closing <tag .../>).
std::string remove_element(std::string_view s, std::string_view tag) {
  const std::string open_tag = "<" + std::string(tag);
  const std::string close_tag = "</" + std::string(tag);
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t open = ifind(s, open_tag, pos);
    while (open != std::string_view::npos) {
      const std::size_t after = open + open_tag.size();
      if (after >= s.size()) break;
      const char c = s[after];
      if (c == ' ' || c == '>' || c == '/' || c == '\t' || c == '\n') break;
      open = ifind(s, open_tag, after);
    }
    if (open == std::string_view::npos) {
      out.append(s.substr(pos));
      break;
    }
    out.append(s.substr(pos, open - pos));
    const std::size_t tag_end = s.find('>', open);
    if (tag_end == std::string_view::npos) break;
    if (s[tag_end - 1] == '/') {
      pos = tag_end + 1;
      continue;
    }
    const std::size_t close = ifind(s, close_tag, tag_end + 1);
    if (close == std::string_view::npos) {
      pos = tag_end + 1;
      continue;
    }
    const std::size_t close_end = s.find('>', close);
    pos = close_end == std::string_view::npos ? s.size() : close_end + 1;
  }
  return out;
}

// Removes balanced `open ... close` regions, honoring nesting.
std::string remove_balanced(std::string_view s, std::string_view open, std::string_view close) {
  std::string out;
  out.reserve(s.size());
  int depth = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, open.size(), open) == 0) {
      ++depth;
      i += open.size();
      continue;
    }
    if (depth > 0 && s.compare(i, close.size(), close) == 0) {
      --depth;
      i += close.size();
      continue;
    }
    if (depth == 0) out.push_back(s[i]);
    ++i;
  }
  return out;
}

std::size_t matching_link_close(std::string_view s, std::size_t open) {
  int depth = 0;
  std::size_t i = open;
  while (i + 1 < s.size()) {
    if (s[i] == '[' && s[i + 1] == '[') {
      ++depth;
      i += 2;
    } else if (s[i] == ']' && s[i + 1] == ']') {
      if (--depth == 0) return i;
      i += 2;
    } else {
      ++i;
    }
  }
  return std::string_view::npos;
}

std::string reduce_links(std::string_view s) {
  static constexpr std::array<std::string_view, 5> kDropped = {"file:", "image:", "category:", "media:",
                                                               ":category:"};
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, 2, "[[") == 0) {
      const std::size_t close = matching_link_close(s, i);
      if (close == std::string_view::npos) {
        i += 2;
        continue;
      }
      std::string_view inner = s.substr(i + 2, close - i - 2);
      i = close + 2;
      const bool dropped = std::any_of(kDropped.begin(), kDropped.end(),
                                       [&](std::string_view p) { return istarts_with(inner, 0, p); });
      if (dropped) continue;
      const std::size_t bar = inner.rfind('|');
      std::string_view label = bar == std::string_view::npos ? inner : inner.substr(bar + 1);
      if (bar == std::string_view::npos && !label.empty() && label.front() == ':') label.remove_prefix(1);
      out.append(reduce_links(label));
      continue;
    }
    if (s[i] == '[' && (istarts_with(s, i + 1, "http://") || istarts_with(s, i + 1, "https://") ||
                        istarts_with(s, i + 1, "//"))) {
      const std::size_t close = s.find(']', i);
      if (close != std::string_view::npos) {
        std::string_view inner = s.substr(i + 1, close - i - 1);
        const std::size_t space = inner.find(' ');
        if (space != std::string_view::npos) out.append(inner.substr(space + 1));
        i = close + 1;
        continue;
      }
    }
    out.push_back(s[i]);
    ++i;
  }
  return out;
}

std::string remove_emphasis(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '\'') {
      out.push_back(s[i++]);
      continue;
    }
    std::size_t run = 0;
    while (i + run < s.size() && s[i + run] == '\'') ++run;
    if (run == 1) {
      out.push_back('\'');
    } else if (run == 4) {
      out.push_back('\'');
    } else if (run > 5) {
      out.append(run - 5, '\'');
    }
    i += run;
  }
  return out;
}

std::string remove_tags(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '<' && i + 1 < s.size() &&
        (std::isalpha(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '/' || s[i + 1] == '!')) {
      const std::size_t close = s.find('>', i);
      if (close != std::string_view::npos) {
        // Block-level tags separate words.
        out.push_back(' ');
        i = close + 1;
        continue;
      }
    }
    out.push_back(s[i++]);
  }
  return out;
}

std::string decode_entities(std::string_view s) {
  struct Named {
    std::string_view name;
    char32_t cp;
  };
  static constexpr std::array<Named, 10> kNamed = {{{"amp", '&'},
                                                    {"lt", '<'},
                                                    {"gt", '>'},
                                                    {"quot", '"'},
                                                    {"apos", '\''},
                                                    {"nbsp", ' '},
                                                    {"ndash", 0x2013},
                                                    {"mdash", 0x2014},
                                                    {"minus", 0x2212},
                                                    {"thinsp", ' '}}};
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '&') {
      const std::size_t semi = s.find(';', i);
      if (semi != std::string_view::npos && semi - i <= 10) {
        std::string_view name = s.substr(i + 1, semi - i - 1);
        char32_t cp = 0;
        if (!name.empty() && name[0] == '#') {
          const bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
          const std::string digits(name.substr(hex ? 2 : 1));
          if (!digits.empty()) cp = static_cast<char32_t>(std::strtoul(digits.c_str(), nullptr, hex ? 16 : 10));
        } else {
          for (const auto& n : kNamed) {
            if (n.name == name) cp = n.cp;
          }
        }
        if (cp != 0) {
          text::append_utf8(out, cp);
          i = semi + 1;
          continue;
        }
      }
    }
    out.push_back(s[i++]);
  }
  return out;
}

std::string remove_magic_words(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, 2, "__") == 0) {
      std::size_t j = i + 2;
      while (j < s.size() && std::isupper(static_cast<unsigned char>(s[j]))) ++j;
      if (j > i + 2 && s.compare(j, 2, "__") == 0) {
        i = j + 2;
        continue;
      }
    }
    out.push_back(s[i++]);
  }
  return out;
}

// Line-leading list/indent markers carry no prose.
std::string remove_line_markers(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool line_start = true;
  for (char c : s) {
    if (line_start && (c == '*' || c == '#' || c == ':' || c == ';')) continue;
    line_start = (c == '\n');
    out.push_back(c);
  }
  return out;
}

// Constructs invisible in the rendered lead.
std::string remove_hidden_wikitext(std::string_view raw) {
  std::string s = remove_comments(raw);
  s = remove_element(s, "ref");
  s = remove_balanced(s, "{{", "}}");
  s = remove_balanced(s, "{|", "|}");
  for (std::string_view tag : {"math", "gallery", "score", "timeline", "syntaxhighlight"}) s = remove_element(s, tag);
  return s;
}

std::string strip_html(std::string_view raw) {
  std::string s = remove_comments(raw);
  for (std::string_view tag : {"sup", "style", "script", "table"}) s = remove_element(s, tag);
  s = remove_tags(s);
  s = decode_entities(s);
  return text::normalize_space(s);
}

void push_unique(std::vector<std::string>& out, std::string keyword) {
  if (keyword.empty()) return;
  if (std::find(out.begin(), out.end(), keyword) == out.end()) out.push_back(std::move(keyword));
}

std::string clean_span(std::string_view span) {
  std::string s = reduce_links(span);
  s = remove_emphasis(s);
  s = remove_tags(s);
  s = decode_entities(s);
  return text::normalize_space(s);
}

std::vector<std::string> bold_from_wikitext(std::string_view raw) {
  const std::string visible = remove_hidden_wikitext(raw);
  std::vector<std::string> out;
  std::string_view body = visible;
  std::size_t line_start = 0;
  while (line_start <= body.size()) {
    std::size_t line_end = body.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = body.size();
    std::string_view line = body.substr(line_start, line_end - line_start);

    bool bold = false;
    std::string span;
    std::size_t i = 0;
    while (i < line.size()) {
      if (line[i] != '\'') {
        if (bold) span.push_back(line[i]);
        ++i;
        continue;
      }
      std::size_t run = 0;
      while (i + run < line.size() && line[i + run] == '\'') ++run;
      i += run;
      std::size_t literal = 0;
      bool toggles_bold = false;
      if (run == 1) {
        literal = 1;
      } else if (run == 2) {
        if (bold) span.append("''");
      } else if (run == 3) {
        toggles_bold = true;
      } else if (run == 4) {
        literal = 1;
        toggles_bold = true;
      } else {
        literal = run - 5;
        toggles_bold = true;
      }
      if (bold) span.append(literal, '\'');
      if (toggles_bold) {
        if (bold) push_unique(out, clean_span(span));
        span.clear();
        bold = !bold;
      }
    }
    // An unterminated bold run ends with its line.
    if (bold) push_unique(out, clean_span(span));
    if (line_end == body.size()) break;
    line_start = line_end + 1;
  }
  return out;
}

std::vector<std::string> bold_from_html(std::string_view raw) {
  const std::string s = remove_comments(raw);
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t best = std::string::npos;
    std::string_view close_tag;
    for (auto [open, close] : {std::pair<std::string_view, std::string_view>{"<b", "</b>"},
                               std::pair<std::string_view, std::string_view>{"<strong", "</strong>"}}) {
      std::size_t at = ifind(s, open, pos);
      while (at != std::string::npos && at + open.size() < s.size() && s[at + open.size()] != '>' &&
             s[at + open.size()] != ' ')
        at = ifind(s, open, at + 1);
      if (at < best) {
        best = at;
        close_tag = close;
      }
    }
    if (best == std::string::npos) break;
    const std::size_t tag_end = s.find('>', best);
    if (tag_end == std::string::npos) break;
    const std::size_t close = ifind(s, close_tag, tag_end + 1);
    if (close == std::string::npos) break;
    push_unique(out, strip_html(std::string_view(s).substr(tag_end + 1, close - tag_end - 1)));
    pos = close + close_tag.size();
  }
  return out;
}

}  // namespace

MarkupFormat detect_format(std::string_view raw) {
  if (raw.find("'''") != std::string_view::npos) return MarkupFormat::Wikitext;
  if (ifind(raw, "<b>") != std::string_view::npos || ifind(raw, "<b ") != std::string_view::npos ||
      ifind(raw, "<strong") != std::string_view::npos || ifind(raw, "<p>") != std::string_view::npos)
    return MarkupFormat::Html;
  return MarkupFormat::Wikitext;
}

std::string_view lead_section(std::string_view raw) {
  if (detect_format(raw) == MarkupFormat::Html) {
    for (std::size_t i = 0; i + 2 < raw.size(); ++i) {
      if (raw[i] == '<' && (raw[i + 1] == 'h' || raw[i + 1] == 'H') && raw[i + 2] >= '1' && raw[i + 2] <= '6')
        return raw.substr(0, i);
    }
    return raw;
  }
  std::size_t line_start = 0;
  while (line_start < raw.size()) {
    std::size_t line_end = raw.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = raw.size();
    std::string_view line = text::trim(raw.substr(line_start, line_end - line_start));
    if (line.size() >= 3 && line.front() == '=' && line.back() == '=') return raw.substr(0, line_start);
    line_start = line_end + 1;
  }
  return raw;
}

namespace {

std::string strip_wikitext(std::string_view raw_lead) {
  std::string s = remove_hidden_wikitext(raw_lead);
  s = reduce_links(s);
  s = remove_emphasis(s);
  s = remove_tags(s);
  s = remove_magic_words(s);
  s = remove_line_markers(s);
  s = decode_entities(s);
  // Empty parentheses left behind by dropped templates, e.g. "X ( ) is".
  std::string out = text::normalize_space(s);
  for (std::string_view junk : {"( )", "()", "(; ", "(, "}) {
    std::size_t at;
    while ((at = out.find(junk)) != std::string::npos) {
      if (junk == "(; " || junk == "(, ") {
        out.replace(at, junk.size(), "(");
      } else {
        out.erase(at, junk.size());
      }
    }
  }
  out = text::normalize_space(out);
  std::string cleaned;
  cleaned.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] == ' ' && i + 1 < out.size() && (out[i + 1] == ',' || out[i + 1] == '.')) continue;
    cleaned.push_back(out[i]);
  }
  return cleaned;
}

}  // namespace

std::string strip_markup(std::string_view raw_lead) {
  std::string plain = detect_format(raw_lead) == MarkupFormat::Html ? strip_html(raw_lead) : strip_wikitext(raw_lead);
  // Unbalanced leftovers from malformed input.
  if (!has_markup_delimiters(plain)) return plain;
  while (has_markup_delimiters(plain)) {
    for (std::string_view d : kDelimiters) {
      for (std::size_t at; (at = plain.find(d)) != std::string::npos;) plain.erase(at, d.size());
    }
  }
  return text::normalize_space(plain);
}

std::vector<std::string> extract_bold_keywords(std::string_view raw_lead) {
  return detect_format(raw_lead) == MarkupFormat::Html ? bold_from_html(raw_lead) : bold_from_wikitext(raw_lead);
}

bool has_markup_delimiters(std::string_view s) {
  for (std::string_view d : kDelimiters) {
    if (s.find(d) != std::string_view::npos) return true;
  }
  return false;
}

}  // namespace eduverba::wikitext
