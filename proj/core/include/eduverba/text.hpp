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

// UTF-8 helpers shared by the screening, metric and grid code. Character
// classes come from the C.UTF-8 locale so accented names count as letters.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace eduverba::text {

/// Decodes one code point starting at `pos` and advances `pos`. Invalid
/// sequences decode to U+FFFD and consume one byte.
char32_t decode_next(std::string_view s, std::size_t& pos) noexcept;
void append_utf8(std::string& out, char32_t cp);
std::u32string to_u32(std::string_view s);
std::string to_utf8(std::u32string_view s);

bool is_letter(char32_t cp) noexcept;
bool is_alnum(char32_t cp) noexcept;
bool is_upper(char32_t cp) noexcept;
bool is_space(char32_t cp) noexcept;
char32_t to_lower(char32_t cp) noexcept;
char32_t to_upper(char32_t cp) noexcept;

std::string lowercase(std::string_view s);
std::string uppercase(std::string_view s);

std::string_view trim(std::string_view s) noexcept;
/// Trims and collapses internal whitespace runs to single spaces.
std::string normalize_space(std::string_view s);
/// Whitespace tokenization; used for every word count in the toolkit.
std::vector<std::string_view> split_whitespace(std::string_view s);
std::size_t word_count(std::string_view s);

/// Number of Unicode letters in `s` (spaces and punctuation not counted).
std::size_t letter_count(std::string_view s);

bool iequals(std::string_view a, std::string_view b);
bool icontains(std::string_view haystack, std::string_view needle);

}  // namespace eduverba::text
