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

#include <gtest/gtest.h>

#include "eduverba/error.hpp"
#include "eduverba/text.hpp"

namespace eduverba::text {
namespace {

TEST(Utf8, RoundTripsMixedScripts) {
  const std::string s = "Caf\xC3\xA9 \xE6\x97\xA5\xE6\x9C\xAC \xF0\x9F\x98\x80";
  EXPECT_EQ(to_utf8(to_u32(s)), s);
  EXPECT_EQ(to_u32(s).size(), 9u);
}

TEST(Utf8, InvalidByteDecodesToReplacement) {
  std::size_t pos = 0;
  EXPECT_EQ(decode_next("\xFF" "a", pos), U'�');
  EXPECT_EQ(pos, 1u);
  EXPECT_EQ(decode_next("\xFF" "a", pos), U'a');
}

TEST(CharClasses, AccentedLettersAreLetters) {
  EXPECT_TRUE(is_letter(U'é'));
  EXPECT_TRUE(is_letter(U'Z'));
  EXPECT_FALSE(is_letter(U'-'));
  EXPECT_FALSE(is_letter(U'7'));
  EXPECT_TRUE(is_alnum(U'7'));
  EXPECT_EQ(uppercase("\xC3\xA9t\xC3\xA9"), "\xC3\x89T\xC3\x89");
}

TEST(Words, WhitespaceTokenization) {
  EXPECT_EQ(word_count(""), 0u);
  EXPECT_EQ(word_count("  one\ttwo\n three  "), 3u);
  EXPECT_EQ(normalize_space("  a \n\t b  "), "a b");
  EXPECT_EQ(trim("\t x y \n"), "x y");
}

TEST(Letters, SpacesAndPunctuationNotCounted) {
  EXPECT_EQ(letter_count("South American tapir"), 18u);
  EXPECT_EQ(letter_count("COVID-19"), 5u);
}

TEST(Compare, CaseInsensitive) {
  EXPECT_TRUE(iequals("Robocall", "ROBOCALL"));
  EXPECT_FALSE(iequals("Robocall", "Robocalls"));
  EXPECT_TRUE(icontains("An automated ROBOCALL here", "robocall"));
  EXPECT_FALSE(icontains("short", "longer needle"));
}

TEST(Errors, ExitCodesByCategory) {
  EXPECT_EQ(exit_code_for(Errc::EmptyConfig), 1);
  EXPECT_EQ(exit_code_for(Errc::UnboundPlaceholder), 1);
  EXPECT_EQ(exit_code_for(Errc::SourceUnavailable), 2);
  EXPECT_EQ(exit_code_for(Errc::PortInUse), 2);
  EXPECT_EQ(exit_code_for(Errc::InvariantViolation), 3);
  EXPECT_EQ(exit_code_for(Errc::MalformedRecord), 3);
  Error e(Errc::EmptyLead, "x");
  EXPECT_EQ(e.code(), Errc::EmptyLead);
  EXPECT_NE(std::string(e.what()).find("EmptyLead"), std::string::npos);
}

}  // namespace
}  // namespace eduverba::text
