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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slotlab/game.hpp"
#include "slotlab/rng.hpp"

namespace slotlab::llm {
class Client;
}

namespace slotlab::agents {

enum class DecisionKind { Bet, Quit };

struct LlmCallStats {
  int http_attempts = 0;       // across all prompts for this decision
  double latency_ms = 0.0;     // wall time spent talking to the endpoint
  std::string request_id;      // provider id of the last completion
  long prompt_tokens = -1;     // summed when the provider reports usage
  long completion_tokens = -1;

  bool recorded() const { return http_attempts > 0; }
};

struct Decision {
  DecisionKind kind = DecisionKind::Quit;
  double amount = 0.0;       // Bet only
  std::string raw_response;  // verbatim agent output, kept for audit
  bool fallback = false;     // defaulted to Quit after repeated parse failures
  int parse_attempts = 0;    // prompts sent before a parseable reply (LLM only)
  LlmCallStats llm;          // request accounting (LLM only)
};

struct LlmParams {
  std::string endpoint;  // full chat-completions URL
  std::string model;
  double temperature = 1.0;
  int max_output_tokens = 512;
  int retries = 4;           // transport retries (exponential backoff)
  int parse_retries = 2;     // re-prompts after an unparseable reply
  int timeout_ms = 30000;
  int backoff_base_ms = 500;
  std::string api_key_env = "LLM_API_KEY";
};

struct SyntheticParams {
  double base_fraction = 0.1;    // f in (0,1]: fraction of balance wagered
  double loss_chase_mult = 1.0;  // >= 1: stake multiplier per trailing loss
  double win_chase_mult = 1.0;   // >= 1: stake multiplier per trailing win
  double extreme_prob = 0.0;     // chance of an all-in-style override
  double quit_hazard = 0.0;      // per-round stop probability
  std::optional<double> target_balance;  // quit once reached (component G analogue)

  void validate() const;
};

struct ScriptedParams {
  std::vector<Decision> sequence;  // nonempty; replays then quits
};

struct RandomParams {
  std::uint64_t seed = 0;
  double quit_prob = 0.1;
};

struct AgentSpec {
  enum class Kind { Llm, Synthetic, Scripted, Random };
  Kind kind = Kind::Synthetic;
  LlmParams llm;
  SyntheticParams synthetic;
  ScriptedParams scripted;
  RandomParams random;

  void validate() const;
  const char* kind_name() const;
};

// What an agent may observe when deciding.
struct StateView {
  double balance = 0.0;
  std::span<const game::RoundRecord> history;
  int consecutive_losses = 0;
  int consecutive_wins = 0;
  int round = 0;
};

// Extracts a Decision from free-form agent text. The FINAL whole-word
// "bet"/"quit" (case-insensitive) is the decision keyword. For a bet under
// variable betting the last $-prefixed or bare number after the keyword is
// the stake, clamped into the legal range; under fixed betting any stated
// amount is overridden by the fixed stake. Returns nullopt when no keyword
// (or no variable-stake amount) is found.
std::optional<Decision> parse_decision(std::string_view raw,
                                       const game::BetRange& range,
                                       game::BettingStyle::Kind style);

// Deterministic parameterized policy used for calibration sweeps. Draw order
// per call: quit-hazard first, then extreme-override.
Decision synthetic_policy(const SyntheticParams& params, const StateView& view,
                          const game::BetRange& range, rng::Stream& policy_rng);

class Agent {
 public:
  virtual ~Agent() = default;
  // legal range is always present when called; every returned Bet must lie
  // within it. Throws AgentUnavailable when a remote agent cannot answer.
  virtual Decision decide(const std::string& prompt, const game::BetRange& range,
                          const StateView& view) = 0;
};

// Builds a per-trial agent instance. Scripted agents get a fresh cursor;
// synthetic/random agents derive their policy stream from policy_seed. LLM
// agents share `client` (which bounds in-flight requests across workers).
std::unique_ptr<Agent> make_agent(const AgentSpec& spec,
                                  game::BettingStyle::Kind style,
                                  std::uint64_t policy_seed,
                                  llm::Client* client = nullptr);

const char* to_string(DecisionKind k);
DecisionKind decision_kind_from_string(const std::string& s);

}  // namespace slotlab::agents
