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

namespace eduverba::detail {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // leading '/', no trailing '/'
};

/// Splits an absolute http(s) URL into the origin httplib connects to and
/// the path prefix requests are issued under.
SplitUrl split_url(std::string_view url);

std::string url_encode(std::string_view s);

}  // namespace eduverba::detail
