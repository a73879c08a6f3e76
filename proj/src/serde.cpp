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

#include "slotlab/serde.hpp"

namespace slotlab::serde {

using nlohmann::json;

namespace {

[[noreturn]] void bad_json(const std::string& what, const json::exception& e) {
  raise(Status::FormatError, what + ": " + e.what());
}

}  // namespace

json betting_style_to_json(const game::BettingStyle& style) {
  if (style.kind == game::BettingStyle::Kind::Fixed) {
    return json{{"style", "fixed"}, {"amount", style.fixed_amount}};
  }
  return json{{"style", "variable"},
              {"min", style.min},
              {"max", style.max},
              {"allow_all_in", style.allow_all_in}};
}

game::BettingStyle betting_style_from_json(const json& j) {
  try {
    const std::string kind = j.at("style").get<std::string>();
    if (kind == "fixed") {
      return game::BettingStyle::fixed(j.value("amount", 10.0));
    }
    if (kind == "variable") {
      return game::BettingStyle::variable(j.value("min", 5.0),
                                          j.value("max", 100.0),
                                          j.value("allow_all_in", false));
    }
    raise(Status::FormatError, "unknown betting style: " + kind);
  } catch (const json::exception& e) {
    bad_json("bad betting style", e);
  }
}

json game_config_to_json(const game::GameConfig& config) {
  return json{{"initial_balance", config.initial_balance},
              {"win_prob", config.win_prob},
              {"payout_mult", config.payout_mult},
              {"betting", betting_style_to_json(config.betting)},
              {"max_rounds", config.max_rounds},
              {"history_window", config.history_window},
              {"warning_threshold", config.warning_threshold}};
}

game::GameConfig game_config_from_json(const json& j,
                                       const game::GameConfig& defaults) {
  try {
    game::GameConfig config = defaults;
    config.initial_balance = j.value("initial_balance", defaults.initial_balance);
    config.win_prob = j.value("win_prob", defaults.win_prob);
    config.payout_mult = j.value("payout_mult", defaults.payout_mult);
    if (j.contains("betting")) {
      config.betting = betting_style_from_json(j["betting"]);
    }
    config.max_rounds = j.value("max_rounds", defaults.max_rounds);
    config.history_window = j.value("history_window", defaults.history_window);
    config.warning_threshold =
        j.value("warning_threshold", defaults.warning_threshold);
    config.validate();
    return config;
  } catch (const json::exception& e) {
    bad_json("bad game config", e);
  }
}

json round_record_to_json(const game::RoundRecord& record) {
  return json{{"round", record.round_index},
              {"balance_before", record.balance_before},
              {"bet", record.bet},
              {"outcome", game::to_string(record.outcome)},
              {"payout", record.payout},
              {"balance_after", record.balance_after}};
}

game::RoundRecord round_record_from_json(const json& j) {
  try {
    game::RoundRecord r;
    r.round_index = j.at("round").get<int>();
    r.balance_before = j.at("balance_before").get<double>();
    r.bet = j.at("bet").get<double>();
    r.outcome = game::outcome_from_string(j.at("outcome").get<std::string>());
    r.payout = j.value("payout", r.outcome == game::Outcome::Win
                                     ? r.bet * 3.0
                                     : 0.0);
    r.balance_after = j.value("balance_after",
                              r.balance_before - r.bet + r.payout);
    return r;
  } catch (const json::exception& e) {
    bad_json("bad round record", e);
  }
}

json game_state_to_json(const game::GameState& state) {
  auto history = json::array();
  for (const auto& r : state.history) history.push_back(round_record_to_json(r));
  return json{{"balance", state.balance},
              {"round", state.round},
              {"history", std::move(history)},
              {"consecutive_losses", state.consecutive_losses},
              {"status", game::to_string(state.status)},
              {"rng_seed", state.rng_seed}};
}

json decision_to_json(const agents::Decision& decision) {
  json j{{"kind", agents::to_string(decision.kind)}};
  if (decision.kind == agents::DecisionKind::Bet) j["amount"] = decision.amount;
  if (!decision.raw_response.empty()) j["raw_response"] = decision.raw_response;
  if (decision.fallback) j["fallback"] = true;
  if (decision.parse_attempts > 0) j["parse_attempts"] = decision.parse_attempts;
  if (decision.llm.recorded()) {
    json stats{{"http_attempts", decision.llm.http_attempts},
               {"latency_ms", decision.llm.latency_ms}};
    if (!decision.llm.request_id.empty()) {
      stats["request_id"] = decision.llm.request_id;
    }
    if (decision.llm.prompt_tokens >= 0) {
      stats["prompt_tokens"] = decision.llm.prompt_tokens;
    }
    if (decision.llm.completion_tokens >= 0) {
      stats["completion_tokens"] = decision.llm.completion_tokens;
    }
    j["llm"] = std::move(stats);
  }
  return j;
}

agents::Decision decision_from_json(const json& j) {
  try {
    agents::Decision d;
    d.kind = agents::decision_kind_from_string(j.at("kind").get<std::string>());
    d.amount = j.value("amount", 0.0);
    d.raw_response = j.value("raw_response", "");
    d.fallback = j.value("fallback", false);
    d.parse_attempts = j.value("parse_attempts", 0);
    if (j.contains("llm")) {
      const auto& stats = j["llm"];
      d.llm.http_attempts = stats.value("http_attempts", 0);
      d.llm.latency_ms = stats.value("latency_ms", 0.0);
      d.llm.request_id = stats.value("request_id", "");
      d.llm.prompt_tokens = stats.value("prompt_tokens", -1L);
      d.llm.completion_tokens = stats.value("completion_tokens", -1L);
    }
    return d;
  } catch (const json::exception& e) {
    bad_json("bad decision", e);
  }
}

json agent_spec_to_json(const agents::AgentSpec& spec) {
  using Kind = agents::AgentSpec::Kind;
  json j{{"type", spec.kind_name()}};
  switch (spec.kind) {
    case Kind::Llm:
      j["endpoint"] = spec.llm.endpoint;
      j["model"] = spec.llm.model;
      j["temperature"] = spec.llm.temperature;
      j["max_output_tokens"] = spec.llm.max_output_tokens;
      j["retries"] = spec.llm.retries;
      j["parse_retries"] = spec.llm.parse_retries;
      j["timeout_ms"] = spec.llm.timeout_ms;
      j["backoff_base_ms"] = spec.llm.backoff_base_ms;
      j["api_key_env"] = spec.llm.api_key_env;  // name only, never the key
      break;
    case Kind::Synthetic:
      j["base_fraction"] = spec.synthetic.base_fraction;
      j["loss_chase_mult"] = spec.synthetic.loss_chase_mult;
      j["win_chase_mult"] = spec.synthetic.win_chase_mult;
      j["extreme_prob"] = spec.synthetic.extreme_prob;
      j["quit_hazard"] = spec.synthetic.quit_hazard;
      if (spec.synthetic.target_balance.has_value()) {
        j["target_balance"] = *spec.synthetic.target_balance;
      }
      break;
    case Kind::Scripted: {
      auto seq = json::array();
      for (const auto& d : spec.scripted.sequence) {
        seq.push_back(decision_to_json(d));
      }
      j["sequence"] = std::move(seq);
      break;
    }
    case Kind::Random:
      j["seed"] = spec.random.seed;
      j["quit_prob"] = spec.random.quit_prob;
      break;
  }
  return j;
}

agents::AgentSpec agent_spec_from_json(const json& j) {
  try {
    agents::AgentSpec spec;
    const std::string type = j.at("type").get<std::string>();
    if (type == "llm") {
      spec.kind = agents::AgentSpec::Kind::Llm;
      spec.llm.endpoint = j.at("endpoint").get<std::string>();
      spec.llm.model = j.at("model").get<std::string>();
      spec.llm.temperature = j.value("temperature", 1.0);
      spec.llm.max_output_tokens = j.value("max_output_tokens", 512);
      spec.llm.retries = j.value("retries", 4);
      spec.llm.parse_retries = j.value("parse_retries", 2);
      spec.llm.timeout_ms = j.value("timeout_ms", 30000);
      spec.llm.backoff_base_ms = j.value("backoff_base_ms", 500);
      spec.llm.api_key_env = j.value("api_key_env", "LLM_API_KEY");
    } else if (type == "synthetic") {
      spec.kind = agents::AgentSpec::Kind::Synthetic;
      spec.synthetic.base_fraction = j.value("base_fraction", 0.1);
      spec.synthetic.loss_chase_mult = j.value("loss_chase_mult", 1.0);
      spec.synthetic.win_chase_mult = j.value("win_chase_mult", 1.0);
      spec.synthetic.extreme_prob = j.value("extreme_prob", 0.0);
      spec.synthetic.quit_hazard = j.value("quit_hazard", 0.0);
      if (j.contains("target_balance") && !j["target_balance"].is_null()) {
        spec.synthetic.target_balance = j["target_balance"].get<double>();
      }
    } else if (type == "scripted") {
      spec.kind = agents::AgentSpec::Kind::Scripted;
      for (const auto& dj : j.at("sequence")) {
        spec.scripted.sequence.push_back(decision_from_json(dj));
      }
    } else if (type == "random") {
      spec.kind = agents::AgentSpec::Kind::Random;
      spec.random.seed = j.value("seed", std::uint64_t{0});
      spec.random.quit_prob = j.value("quit_prob", 0.1);
    } else {
      raise(Status::FormatError, "unknown agent type: " + type);
    }
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    bad_json("bad agent spec", e);
  }
}

json weights_to_json(const metrics::Weights& weights) {
  return json{{"aggressiveness", weights.aggressiveness},
              {"loss_chasing", weights.loss_chasing},
              {"extreme_betting", weights.extreme_betting}};
}

metrics::Weights weights_from_json(const json& j) {
  try {
    metrics::Weights w;
    w.aggressiveness = j.value("aggressiveness", 0.4);
    w.loss_chasing = j.value("loss_chasing", 0.3);
    w.extreme_betting = j.value("extreme_betting", 0.3);
    w.validate();
    return w;
  } catch (const json::exception& e) {
    bad_json("bad weights", e);
  }
}

json transcript_metrics_to_json(const metrics::TranscriptMetrics& m) {
  json j{{"index", m.index},   {"i_ba", m.i_ba},
         {"i_lc", m.i_lc},     {"i_eb", m.i_eb},
         {"rounds", m.rounds}, {"total_bet", m.total_bet},
         {"net_pl", m.net_pl}, {"bankrupt", m.bankrupt},
         {"end_status", game::to_string(m.end_status)}};
  if (m.zero_rounds) j["zero_rounds"] = true;
  return j;
}

}  // namespace slotlab::serde
