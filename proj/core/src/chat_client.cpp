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

#include <httplib.h>

#include <cstdlib>
#include <thread>

#include "eduverba/error.hpp"
#include "eduverba/generate.hpp"
#include "http_util.hpp"

namespace eduverba {

HttpChatClient::HttpChatClient(std::optional<std::string> api_key) {
  if (api_key) {
    api_key_ = *api_key;
  } else if (const char* env = std::getenv("EDUVERBA_API_KEY")) {
    api_key_ = env;
  }
}

nlohmann::json HttpChatClient::request_body(const std::string& prompt, const GenParams& params) {
  nlohmann::json body = {{"model", params.model_name},
                         {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
                         {"temperature", params.temperature},
                         {"top_p", params.top_p}};
  if (params.send_top_k) body["top_k"] = params.top_k;
  return body;
}

std::string HttpChatClient::complete(const std::string& prompt, const GenParams& params) {
  const auto url = detail::split_url(params.endpoint);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  const std::string body = request_body(prompt, params).dump();

  std::string last_error;
  const int attempts = std::max(1, params.max_retries);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(200) * (1 << (attempt - 1)));
    httplib::Client client(url.origin);
    client.set_connection_timeout(std::chrono::seconds(10));
    client.set_read_timeout(params.timeout);
    client.set_write_timeout(params.timeout);
    auto res = client.Post(url.path.empty() ? "/" : url.path, headers, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403)
      throw Error(Errc::AuthFailure, params.endpoint + " rejected the credentials (HTTP " + std::to_string(res->status) + ")");
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw Error(Errc::EndpointUnreachable, params.endpoint + " answered HTTP " + std::to_string(res->status));

    const auto j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded()) return res->body;  // surfaced as Malformed by the caller
    try {
      const auto& content = j.at("choices").at(0).at("message").at("content");
      return content.is_string() ? content.get<std::string>() : std::string();
    } catch (const nlohmann::json::exception&) {
      return res->body;
    }
  }
  throw Error(Errc::EndpointUnreachable, params.endpoint + ": " + last_error);
}

}  // namespace eduverba
