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

#include <sstream>

#include "eduverba/error.hpp"
#include "eduverba/grid.hpp"
#include "eduverba/text.hpp"

namespace eduverba {
namespace {

std::string escape_html(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string text_grid(const CrosswordLayout& layout, RenderView view) {
  const CellMap cells = layout.cell_letters();
  std::string out;
  for (int r = 0; r < layout.rows; ++r) {
    for (int c = 0; c < layout.cols; ++c) {
      const auto it = cells.find({r, c});
      if (it == cells.end()) {
        out.push_back('#');
      } else if (view == RenderView::Blank) {
        out.push_back('.');
      } else {
        text::append_utf8(out, it->second);
      }
    }
    out.push_back('\n');
  }
  return out;
}

void html_table(std::ostringstream& os, const CrosswordLayout& layout, const Numbering& numbering, RenderView view) {
  const CellMap cells = layout.cell_letters();
  os << "<table class=\"grid\">\n";
  for (int r = 0; r < layout.rows; ++r) {
    os << "<tr>";
    for (int c = 0; c < layout.cols; ++c) {
      const auto it = cells.find({r, c});
      if (it == cells.end()) {
        os << "<td class=\"block\"></td>";
        continue;
      }
      os << "<td class=\"cell\">";
      if (const int n = numbering.numbers[r][c]) os << "<span class=\"num\">" << n << "</span>";
      if (view == RenderView::Solution) {
        std::string letter;
        text::append_utf8(letter, it->second);
        os << "<span class=\"letter\">" << escape_html(letter) << "</span>";
      }
      os << "</td>";
    }
    os << "</tr>\n";
  }
  os << "</table>\n";
}

void html_clues(std::ostringstream& os, const Numbering& numbering) {
  auto list = [&](const char* title, const std::vector<NumberedClue>& items) {
    os << "<section class=\"clues\"><h2>" << title << "</h2>\n<ol>\n";
    for (const auto& item : items) {
      os << "<li value=\"" << item.number << "\">" << escape_html(item.clue) << " ("
         << text::to_u32(item.word).size() << ")</li>\n";
    }
    os << "</ol></section>\n";
  };
  list("Across", numbering.across);
  list("Down", numbering.down);
}

constexpr std::string_view kScreenStyle =
    "body{font-family:sans-serif;margin:2em}"
    "table.grid{border-collapse:collapse}"
    "table.grid td{width:2em;height:2em;border:1px solid #333;position:relative;text-align:center;"
    "vertical-align:middle;font-weight:bold}"
    "td.block{background:#222}"
    "span.num{position:absolute;top:1px;left:2px;font-size:0.6em;font-weight:normal}"
    "section.clues{display:inline-block;vertical-align:top;margin-right:3em}";

constexpr std::string_view kPrintStyle =
    "@page{size:A4;margin:15mm}"
    "body{font-family:serif}"
    "table.grid{border-collapse:collapse;margin-bottom:1em}"
    "table.grid td{width:9mm;height:9mm;border:0.3mm solid #000;position:relative;text-align:center}"
    "td.block{background:#000}"
    "span.num{position:absolute;top:0.3mm;left:0.6mm;font-size:7pt}"
    "section.clues{break-inside:avoid}"
    ".solution{break-before:page}"
    ".solution table.grid td{width:5mm;height:5mm;font-size:8pt}";

}  // namespace

RenderFormat parse_render_format(std::string_view s) {
  if (text::iequals(s, "text")) return RenderFormat::Text;
  if (text::iequals(s, "html")) return RenderFormat::Html;
  if (text::iequals(s, "printable")) return RenderFormat::Printable;
  throw Error(Errc::InvalidConfig, "unknown render format '" + std::string(s) + "'");
}

std::string render(const CrosswordLayout& layout, RenderFormat format, RenderView view) {
  if (format == RenderFormat::Text) return text_grid(layout, view);

  CrosswordLayout numbered = layout;
  const Numbering numbering = number_cells(numbered);
  std::ostringstream os;
  os << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>Crossword</title>\n<style>"
     << (format == RenderFormat::Printable ? kPrintStyle : kScreenStyle) << "</style></head>\n<body>\n";
  if (format == RenderFormat::Html) {
    html_table(os, numbered, numbering, view);
    html_clues(os, numbering);
  } else {
    // Puzzle page with empty cells, answers on a page of their own.
    html_table(os, numbered, numbering, RenderView::Blank);
    html_clues(os, numbering);
    if (view == RenderView::Solution) {
      os << "<div class=\"solution\"><h2>Solution</h2>\n";
      html_table(os, numbered, numbering, RenderView::Solution);
      os << "</div>\n";
    }
  }
  os << "</body></html>\n";
  return os.str();
}

CellMap parse_text_grid(std::string_view grid) {
  CellMap cells;
  int r = 0;
  std::size_t pos = 0;
  while (pos < grid.size()) {
    std::size_t end = grid.find('\n', pos);
    if (end == std::string_view::npos) end = grid.size();
    const auto line = text::to_u32(grid.substr(pos, end - pos));
    int c = 0;
    for (char32_t cp : line) {
      if (cp == U'\r') continue;
      if (cp != U'#' && cp != U'.') cells[{r, c}] = cp;
      ++c;
    }
    ++r;
    pos = end + 1;
  }
  return cells;
}

}  // namespace eduverba
