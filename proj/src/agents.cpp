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

#include "slotlab/agents.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "slotlab/llm.hpp"

namespace slotlab::agents {

void SyntheticParams::validate() const {
  require(base_fraction > 0.0 && base_fraction <= 1.0, Status::InvalidArgument,
          "base_fraction must lie in (0,1]");
  require(loss_chase_mult >= 1.0, Status::InvalidArgument,
          "loss_chase_mult must be >= 1");
  require(win_chase_mult >= 1.0, Status::InvalidArgument,
          "win_chase_mult must be >= 1");
  require(extreme_prob >= 0.0 && extreme_prob <= 1.0, Status::InvalidArgument,
          "extreme_prob must lie in [0,1]");
  require(quit_hazard >= 0.0 && quit_hazard <= 1.0, Status::InvalidArgument,
          "quit_hazard must lie in [0,1]");
}

void AgentSpec::validate() const {
  switch (kind) {
    case Kind::Llm:
      require(!llm.endpoint.empty(), Status::InvalidArgument,
              "llm agent requires an endpoint URL");
      require(!llm.model.empty(), Status::InvalidArgument,
              "llm agent requires a model id");
      require(llm.retries >= 0 && llm.parse_retries >= 0,
              Status::InvalidArgument, "retry counts must be >= 0");
      break;
    case Kind::Synthetic:
      synthetic.validate();
      break;
    case Kind::Scripted:
      require(!scripted.sequence.empty(), Status::InvalidArgument,
              "scripted agent requires a nonempty decision sequence");
      break;
    case Kind::Random:
      require(random.quit_prob >= 0.0 && random.quit_prob <= 1.0,
              Status::InvalidArgument, "quit_prob must lie in [0,1]");
      break;
  }
}

const char* AgentSpec::kind_name() const {
  switch (kind) {
    case Kind::Llm:
      return "llm";
    case Kind::Synthetic:
      return "synthetic";
    case Kind::Scripted:
      return "scripted";
    case Kind::Random:
      return "random";
  }
  return "unknown";
}

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// Last whole-word, case-insensitive occurrence of `word` in `text`.
std::size_t rfind_word(std::string_view text, std::string_view word) {
  if (text.size() < word.size()) return std::string_view::npos;
  for (std::size_t start = text.size() - word.size() + 1; start-- > 0;) {
    bool match = true;
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(text[start + i])) !=
          std::tolower(static_cast<unsigned char>(word[i]))) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    if (start > 0 && is_word_char(text[start - 1])) continue;
    const std::size_t end = start + word.size();
    if (end < text.size() && is_word_char(text[end])) continue;
    return start;
  }
  return std::string_view::npos;
}

// Last numeric token ("12", "12.5", "1,000", optionally $-prefixed) at or
// after `from`.
std::optional<double> last_number_after(std::string_view text,
                                        std::size_t from) {
  std::optional<double> result;
  std::size_t i = from;
  while (i < text.size()) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::string token;
    bool seen_dot = false;
    while (i < text.size()) {
      const char c = text[i];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        token.push_back(c);
      } else if (c == ',' && i + 1 < text.size() &&
                 std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
        // thousands separator
      } else if (c == '.' && !seen_dot && i + 1 < text.size() &&
                 std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
        token.push_back('.');
        seen_dot = true;
      } else {
        break;
      }
      ++i;
    }
    result = std::stod(token);
  }
  return result;
}

double clamp_to_range(double amount, const game::BetRange& range) {
  return std::clamp(amount, range.min, range.max);
}

}  // namespace

std::optional<Decision> parse_decision(std::string_view raw,
                                       const game::BetRange& range,
                                       game::BettingStyle::Kind style) {
  if (raw.empty()) return std::nullopt;
  const std::size_t bet_pos = rfind_word(raw, "bet");
  const std::size_t quit_pos = rfind_word(raw, "quit");
  if (bet_pos == std::string_view::npos && quit_pos == std::string_view::npos) {
    return std::nullopt;
  }

  Decision d;
  d.raw_response = std::string(raw);
  if (quit_pos != std::string_view::npos &&
      (bet_pos == std::string_view::npos || quit_pos > bet_pos)) {
    d.kind = DecisionKind::Quit;
    return d;
  }

  d.kind = DecisionKind::Bet;
  if (style == game::BettingStyle::Kind::Fixed) {
    d.amount = range.min;  // any stated amount is overridden by the stake
    return d;
  }
  const auto amount = last_number_after(raw, bet_pos + 3);
  if (!amount.has_value()) return std::nullopt;
  d.amount = clamp_to_range(*amount, range);
  return d;
}

Decision synthetic_policy(const SyntheticParams& params, const StateView& view,
                          const game::BetRange& range, rng::Stream& policy_rng) {
  // Fixed draw order keeps transcripts reproducible for a given seed.
  const double hazard_draw = policy_rng.next_unit();
  const double extreme_draw = policy_rng.next_unit();

  Decision d;
  if (params.target_balance.has_value() &&
      view.balance >= *params.target_balance) {
    d.kind = DecisionKind::Quit;
    return d;
  }
  if (hazard_draw < params.quit_hazard) {
    d.kind = DecisionKind::Quit;
    return d;
  }

  double stake = params.base_fraction * view.balance *
                 std::pow(params.loss_chase_mult, view.consecutive_losses) *
                 std::pow(params.win_chase_mult, view.consecutive_wins);
  stake = clamp_to_range(std::round(stake), range);
  if (extreme_draw < params.extreme_prob) {
    // All-in-style override: wager at least half the balance when the range
    // allows it.
    stake = clamp_to_range(std::max(stake, std::ceil(0.5 * view.balance)), range);
  }
  d.kind = DecisionKind::Bet;
  d.amount = stake;
  return d;
}

namespace {

class SyntheticAgent final : public Agent {
 public:
  SyntheticAgent(const SyntheticParams& params, std::uint64_t policy_seed)
      : params_(params), rng_(policy_seed) {
    params_.validate();
  }

  Decision decide(const std::string&, const game::BetRange& range,
                  const StateView& view) override {
    return synthetic_policy(params_, view, range, rng_);
  }

 private:
  SyntheticParams params_;
  rng::Stream rng_;
};

class ScriptedAgent final : public Agent {
 public:
  explicit ScriptedAgent(const ScriptedParams& params) : params_(params) {
    require(!params_.sequence.empty(), Status::InvalidArgument,
            "scripted agent requires a nonempty decision sequence");
  }

  Decision decide(const std::string&, const game::BetRange& range,
                  const StateView&) override {
    if (cursor_ >= params_.sequence.size()) {
      Decision quit;
      quit.kind = DecisionKind::Quit;
      return quit;  // script exhausted: stop rather than invent bets
    }
    Decision d = params_.sequence[cursor_++];
    if (d.kind == DecisionKind::Bet) d.amount = clamp_to_range(d.amount, range);
    return d;
  }

 private:
  ScriptedParams params_;
  std::size_t cursor_ = 0;
};

class RandomAgent final : public Agent {
 public:
  RandomAgent(const RandomParams& params, std::uint64_t policy_seed)
      : params_(params), rng_(policy_seed ^ params.seed) {}

  Decision decide(const std::string&, const game::BetRange& range,
                  const StateView&) override {
    Decision d;
    if (rng_.next_unit() < params_.quit_prob) {
      d.kind = DecisionKind::Quit;
      return d;
    }
    d.kind = DecisionKind::Bet;
    const auto lo = static_cast<std::int64_t>(std::ceil(range.min));
    const auto hi = static_cast<std::int64_t>(std::floor(range.max));
    d.amount = hi >= lo ? static_cast<double>(rng_.next_int(lo, hi)) : range.min;
    return d;
  }

 private:
  RandomParams params_;
  rng::Stream rng_;
};

class LlmAgent final : public Agent {
 public:
  LlmAgent(const LlmParams& params, game::BettingStyle::Kind style,
           llm::Client* client)
      : params_(params), style_(style), client_(client) {
    require(client_ != nullptr, Status::InvalidArgument,
            "llm agent requires a shared client");
  }

  Decision decide(const std::string& prompt, const game::BetRange& range,
                  const StateView&) override {
    std::string last_raw;
    LlmCallStats stats;
    for (int attempt = 0; attempt <= params_.parse_retries; ++attempt) {
      llm::RequestLog log;
      last_raw = client_->complete(prompt, &log);
      stats.http_attempts += log.attempts;
      stats.latency_ms += log.latency_ms;
      stats.request_id = log.request_id;
      if (log.prompt_tokens >= 0) {
        stats.prompt_tokens = std::max(0L, stats.prompt_tokens) + log.prompt_tokens;
      }
      if (log.completion_tokens >= 0) {
        stats.completion_tokens =
            std::max(0L, stats.completion_tokens) + log.completion_tokens;
      }
      auto parsed = parse_decision(last_raw, range, style_);
      if (parsed.has_value()) {
        parsed->parse_attempts = attempt + 1;
        parsed->llm = stats;
        return *parsed;
      }
    }
    // Conservative fallback: never fabricate a bet from an unparseable reply.
    Decision quit;
    quit.kind = DecisionKind::Quit;
    quit.fallback = true;
    quit.parse_attempts = params_.parse_retries + 1;
    quit.raw_response = last_raw;
    quit.llm = stats;
    return quit;
  }

 private:
  LlmParams params_;
  game::BettingStyle::Kind style_;
  llm::Client* client_;
};

}  // namespace

std::unique_ptr<Agent> make_agent(const AgentSpec& spec,
                                  game::BettingStyle::Kind style,
                                  std::uint64_t policy_seed,
                                  llm::Client* client) {
  spec.validate();
  switch (spec.kind) {
    case AgentSpec::Kind::Synthetic:
      return std::make_unique<SyntheticAgent>(spec.synthetic, policy_seed);
    case AgentSpec::Kind::Scripted:
      return std::make_unique<ScriptedAgent>(spec.scripted);
    case AgentSpec::Kind::Random:
      return std::make_unique<RandomAgent>(spec.random, policy_seed);
    case AgentSpec::Kind::Llm:
      return std::make_unique<LlmAgent>(spec.llm, style, client);
  }
  raise(Status::Internal, "unreachable agent kind");
}

const char* to_string(DecisionKind k) {
  return k == DecisionKind::Bet ? "bet" : "quit";
}

DecisionKind decision_kind_from_string(const std::string& s) {
  if (s == "bet") return DecisionKind::Bet;
  if (s == "quit") return DecisionKind::Quit;
  raise(Status::FormatError, "unknown decision kind: " + s);
}

}  // namespace slotlab::agents
