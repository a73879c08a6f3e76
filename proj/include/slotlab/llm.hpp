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

#pragma once

#include <memory>
#include <string>

#include "slotlab/agents.hpp"

namespace slotlab::llm {

struct RequestLog {
  int attempts = 0;          // HTTP attempts made (1 = no retry needed)
  int status_code = 0;       // last HTTP status
  double latency_ms = 0.0;   // wall time across attempts
  std::string request_id;    // provider id when present
  long prompt_tokens = -1;   // -1 when the provider reports no usage
  long completion_tokens = -1;
};

// Chat-completions client: one user message in, assistant text out.
// Transient failures (transport errors, 408/429/5xx) retry with exponential
// backoff up to params.retries extra attempts; anything else, or running out
// of attempts, throws AgentUnavailable. A process-wide in-flight cap bounds
// concurrent requests independently of the worker pool.
class Client {
 public:
  explicit Client(const agents::LlmParams& params, int max_in_flight = 4);
  ~Client();

  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  std::string complete(const std::string& prompt, RequestLog* log = nullptr);

  const agents::LlmParams& params() const { return params_; }

 private:
  agents::LlmParams params_;
  std::string host_;
  std::string path_;
  int port_ = 80;
  bool https_ = false;
  class Semaphore;
  std::unique_ptr<Semaphore> in_flight_;
};

}  // namespace slotlab::llm
