/*
 Copyright 2026 slotlab developers
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "slotlab/llm.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

namespace slotlab::llm {

namespace {

struct ParsedUrl {
  bool https = false;
  std::string host;
  int port = 80;
  std::string path = "/";
};

ParsedUrl parse_url(const std::string& url) {
  ParsedUrl out;
  std::string rest;
  if (url.rfind("http://", 0) == 0) {
    rest = url.substr(7);
  } else if (url.rfind("https://", 0) == 0) {
    out.https = true;
    out.port = 443;
    rest = url.substr(8);
  } else {
    raise(Status::InvalidArgument, "endpoint must be an http(s) URL: " + url);
  }
  const auto slash = rest.find('/');
  std::string authority = slash == std::string::npos ? rest : rest.substr(0, slash);
  if (slash != std::string::npos) out.path = rest.substr(slash);
  if (const auto colon = authority.find(':'); colon != std::string::npos) {
    out.port = std::stoi(authority.substr(colon + 1));
    authority.erase(colon);
  }
  require(!authority.empty(), Status::InvalidArgument,
          "endpoint URL has no host: " + url);
  out.host = authority;
  return out;
}

bool retryable_status(int code) {
  return code == 408 || code == 429 || (code >= 500 && code < 600);
}

}  // namespace

class Client::Semaphore {
 public:
  explicit Semaphore(int count) : count_(count) {}

  void acquire() {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return count_ > 0; });
    --count_;
  }

  void release() {
    {
      std::lock_guard lock(mutex_);
      ++count_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  int count_;
};

Client::Client(const agents::LlmParams& params, int max_in_flight)
    : params_(params),
      in_flight_(std::make_unique<Semaphore>(std::max(max_in_flight, 1))) {
  const ParsedUrl url = parse_url(params_.endpoint);
  host_ = url.host;
  port_ = url.port;
  path_ = url.path;
  https_ = url.https;
}

Client::~Client() = default;

std::string Client::complete(const std::string& prompt, RequestLog* log) {
  nlohmann::json body = {
      {"model", params_.model},
      {"messages",
       nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
      {"temperature", params_.temperature},
      {"max_tokens", params_.max_output_tokens},
  };
  const std::string payload = body.dump();

  httplib::Headers headers = {{"Accept", "application/json"}};
  if (const char* key = std::getenv(params_.api_key_env.c_str());
      key != nullptr && key[0] != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  struct SlotGuard {
    Semaphore& sem;
    explicit SlotGuard(Semaphore& s) : sem(s) { sem.acquire(); }
    ~SlotGuard() { sem.release(); }
  } guard(*in_flight_);

  const auto start = std::chrono::steady_clock::now();
  std::string failure = "no attempt made";
  for (int attempt = 0; attempt <= params_.retries; ++attempt) {
    if (attempt > 0) {
      const auto delay = std::chrono::milliseconds(
          static_cast<long>(params_.backoff_base_ms) * (1L << (attempt - 1)));
      std::this_thread::sleep_for(std::min(delay, std::chrono::milliseconds(30000)));
    }
    const std::string scheme_host_port = (https_ ? "https://" : "http://") +
                                         host_ + ":" + std::to_string(port_);
    httplib::Client http(scheme_host_port);
    http.set_connection_timeout(0, params_.timeout_ms * 1000L);
    http.set_read_timeout(params_.timeout_ms / 1000, (params_.timeout_ms % 1000) * 1000);
    http.set_write_timeout(params_.timeout_ms / 1000, (params_.timeout_ms % 1000) * 1000);

    auto res = http.Post(path_, headers, payload, "application/json");
    if (log != nullptr) log->attempts = attempt + 1;
    if (!res) {
      failure = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (log != nullptr) log->status_code = res->status;
    if (res->status != 200) {
      failure = "http " + std::to_string(res->status) + ": " + res->body;
      if (retryable_status(res->status)) continue;
      break;  // non-retryable client error
    }

    try {
      const auto reply = nlohmann::json::parse(res->body);
      const std::string content =
          reply.at("choices").at(0).at("message").at("content").get<std::string>();
      if (log != nullptr) {
        log->latency_ms =
            std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - start)
                .count();
        log->request_id = reply.value("id", "");
        if (reply.contains("usage")) {
          log->prompt_tokens = reply["usage"].value("prompt_tokens", -1L);
          log->completion_tokens = reply["usage"].value("completion_tokens", -1L);
        }
      }
      return content;
    } catch (const nlohmann::json::exception& e) {
      failure = std::string("malformed completion response: ") + e.what();
      break;  // a garbled 200 will not improve on retry
    }
  }
  raise(Status::AgentUnavailable,
        "chat completion failed after " + std::to_string(params_.retries + 1) +
            " attempt(s): " + failure);
}

}  // namespace slotlab::llm
