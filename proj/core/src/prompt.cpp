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

#include "eduverba/prompt.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "eduverba/error.hpp"
#include "eduverba/text.hpp"

namespace eduverba {
namespace {

constexpr std::array<std::string_view, 4> kPlaceholders = {"{context}", "{keyword}", "{category}", "{num_clues}"};

constexpr std::string_view kDefaultTemplate =
    R"(You are an educational crossword clue writer. You help teachers turn reference texts into crossword puzzles for students.

Below is a passage from an encyclopedia article in the category "{category}".

Passage:
"""
{context}
"""

Answer word: {keyword}

Write {num_clues} different crossword clues whose answer is the answer word above.
Rules:
- Every clue must be supported by information stated in the passage.
- A clue must never contain the answer word, any part of it, or a variant of it.
- Keep each clue to one short sentence that a student can understand.

Reply only with a JSON object of the form {"clues": ["first clue", "second clue", "third clue"]} and nothing else.
)";

}  // namespace

PromptTemplate::PromptTemplate(std::string template_text, int num_clues)
    : text_(std::move(template_text)), num_clues_(num_clues) {
  if (num_clues_ <= 0) throw Error(Errc::InvalidConfig, "num_clues must be positive");
  for (auto ph : kPlaceholders) {
    const std::size_t first = text_.find(ph);
    if (first == std::string::npos) throw Error(Errc::UnboundPlaceholder, "template lacks " + std::string(ph));
    if (text_.find(ph, first + ph.size()) != std::string::npos)
      throw Error(Errc::UnboundPlaceholder, "template repeats " + std::string(ph));
  }
}

PromptTemplate PromptTemplate::default_template(int num_clues) {
  return PromptTemplate(std::string(kDefaultTemplate), num_clues);
}

PromptTemplate PromptTemplate::from_file(const std::filesystem::path& path, int num_clues) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidConfig, "cannot read prompt template '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return PromptTemplate(buf.str(), num_clues);
}

RenderedPrompt render_prompt(const PromptTemplate& tpl, std::string_view context, std::string_view keyword,
                             std::string_view category) {
  if (text::trim(context).empty() || text::trim(keyword).empty() || text::trim(category).empty())
    throw Error(Errc::InvariantViolation, "context, keyword and category must be non-empty");
  RenderedPrompt out;
  if (!text::icontains(context, keyword)) out.warnings.push_back("keyword '" + std::string(keyword) + "' not found in context");

  const std::string num = std::to_string(tpl.num_clues());
  const std::array<std::string_view, 4> values = {context, keyword, category, num};
  const std::string& t = tpl.text();
  out.text.reserve(t.size() + context.size() + keyword.size() + category.size());
  std::size_t i = 0;
  while (i < t.size()) {
    bool replaced = false;
    if (t[i] == '{') {
      for (std::size_t k = 0; k < kPlaceholders.size(); ++k) {
        if (t.compare(i, kPlaceholders[k].size(), kPlaceholders[k]) == 0) {
          out.text.append(values[k]);
          i += kPlaceholders[k].size();
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out.text.push_back(t[i++]);
  }
  return out;
}

}  // namespace eduverba
