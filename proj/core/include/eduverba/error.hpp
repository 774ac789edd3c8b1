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

#include <stdexcept>
#include <string>
#include <string_view>

namespace eduverba {

/// Failure categories raised by the toolkit. Each maps onto one of the CLI
/// exit codes (1 config, 2 source/network, 3 validation).
enum class Errc {
  // configuration
  EmptyConfig,
  InvalidConfig,
  UnboundPlaceholder,
  // source / network
  SourceUnavailable,
  UnknownCategory,
  PageNotFound,
  EndpointUnreachable,
  AuthFailure,
  PortInUse,
  CorpusUnreadable,
  // validation
  EmptyLead,
  EmptyContext,
  InvariantViolation,
  TestTooLarge,
  UnknownExample,
  InvalidIndex,
  InvalidRating,
  NoEntries,
  WordTooLong,
  NonAlphabetic,
  MalformedRecord,
};

std::string_view errc_name(Errc code) noexcept;

/// 1 = config error, 2 = source/network error, 3 = validation failure.
int exit_code_for(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }
  int exit_code() const noexcept { return exit_code_for(code_); }

 private:
  Errc code_;
};

}  // namespace eduverba
