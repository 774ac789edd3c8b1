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

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace eduverba::wikitext {

enum class MarkupFormat { Wikitext, Html };

/// Triple apostrophes mean wikitext; <b>/<strong> tags mean HTML.
MarkupFormat detect_format(std::string_view raw);

/// Everything before the first section heading (`== ... ==` line, or an
/// <h1>-<h6> tag in HTML).
std::string_view lead_section(std::string_view raw);

/// Plain prose from lead markup. Templates, references, comments, tables and
/// file links are dropped; links and emphasis are reduced to their text.
std::string strip_markup(std::string_view raw_lead);

/// Bold spans in document order, whitespace-normalized, with exact
/// duplicates removed (first occurrence kept, comparison is case-sensitive).
std::vector<std::string> extract_bold_keywords(std::string_view raw_lead);

/// True when `text` still contains any wikitext/HTML delimiter.
bool has_markup_delimiters(std::string_view text);

}  // namespace eduverba::wikitext
