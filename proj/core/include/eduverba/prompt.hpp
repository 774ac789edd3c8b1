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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace eduverba {

/// A clue-generation prompt with the placeholders {context}, {keyword},
/// {category} and {num_clues}, each appearing exactly once. Other braces are
/// literal text, so templates may show JSON examples.
class PromptTemplate {
 public:
  /// Throws UnboundPlaceholder when a placeholder is missing or repeated.
  explicit PromptTemplate(std::string template_text, int num_clues = 3);

  /// The shipped default. Its wording is a reconstruction: it asks for
  /// `num_clues` leak-free clues as a {"clues": [...]} JSON object.
  static PromptTemplate default_template(int num_clues = 3);
  static PromptTemplate from_file(const std::filesystem::path& path, int num_clues = 3);

  const std::string& text() const { return text_; }
  int num_clues() const { return num_clues_; }

 private:
  std::string text_;
  int num_clues_;
};

struct RenderedPrompt {
  std::string text;
  std::vector<std::string> warnings;
};

/// Single-pass substitution; substituted values are never re-scanned.
/// Warns (does not fail) when the keyword is absent from the context.
RenderedPrompt render_prompt(const PromptTemplate& tpl, std::string_view context, std::string_view keyword,
                             std::string_view category);

}  // namespace eduverba
