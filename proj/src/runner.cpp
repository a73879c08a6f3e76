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

#include "slotlab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <chrono>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "slotlab/llm.hpp"
#include "slotlab/rng.hpp"
#include "slotlab/serde.hpp"
#include "slotlab/version.hpp"

namespace slotlab::runner {

using nlohmann::json;

namespace {

// Distinguishes the agent's policy stream from the game's draw stream so the
// two never alias for a given trial seed.
constexpr std::uint64_t kPolicyStreamSalt = 0x706F6C696379ULL;  // "policy"

std::string make_trial_id(const prompts::ConditionCode& condition,
                          int replication) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "r%04d", replication);
  return condition.canonical() + "/" + buf;
}

game::GameConfig config_for_condition(const game::GameConfig& base,
                                      const prompts::ConditionCode& condition) {
  game::GameConfig config = base;
  if (condition.style == game::BettingStyle::Kind::Fixed) {
    if (config.betting.kind != game::BettingStyle::Kind::Fixed) {
      config.betting = game::BettingStyle::fixed();
    }
  } else {
    if (config.betting.kind != game::BettingStyle::Kind::Variable) {
      config.betting = game::BettingStyle::variable();
    }
  }
  return config;
}

}  // namespace

void ExperimentPlan::validate() const {
  agent.validate();
  weights.validate();
  base_game.validate();
  require(replications >= 1, Status::InvalidArgument,
          "replications must be >= 1");
  require(!conditions.empty(), Status::InvalidArgument,
          "plan needs at least one condition");
  require(parallel_limit >= 1, Status::InvalidArgument,
          "parallel_limit must be >= 1");
  std::set<std::string> seen;
  for (const auto& c : conditions) {
    require(seen.insert(c.canonical()).second, Status::InvalidArgument,
            "duplicate condition in plan: " + c.canonical());
  }
  require(!output_dir.empty(), Status::InvalidArgument,
          "plan needs an output directory");
}

std::vector<prompts::ConditionCode> default_conditions() {
  std::vector<prompts::ConditionCode> out;
  out.reserve(64);
  for (const auto style : {game::BettingStyle::Kind::Fixed,
                           game::BettingStyle::Kind::Variable}) {
    for (const auto& comp : prompts::all_compositions()) {
      prompts::ConditionCode code;
      code.components = comp == "BASE" ? "" : comp;
      code.style = style;
      out.push_back(code);
    }
  }
  return out;
}

std::vector<prompts::ConditionCode> expand_condition_args(
    const std::vector<std::string>& entries, const std::string& style) {
  require(style == "fixed" || style == "variable" || style == "both",
          Status::InvalidArgument, "style must be fixed, variable or both");
  std::vector<game::BettingStyle::Kind> styles;
  if (style != "variable") styles.push_back(game::BettingStyle::Kind::Fixed);
  if (style != "fixed") styles.push_back(game::BettingStyle::Kind::Variable);

  std::vector<prompts::ConditionCode> out;
  auto push_unique = [&out](const prompts::ConditionCode& code) {
    if (std::find(out.begin(), out.end(), code) == out.end()) {
      out.push_back(code);
    }
  };

  for (const auto& raw : entries) {
    if (raw == "all" || raw == "ALL") {
      for (const auto& comp : prompts::all_compositions()) {
        for (const auto kind : styles) {
          prompts::ConditionCode code;
          code.components = comp == "BASE" ? "" : comp;
          code.style = kind;
          push_unique(code);
        }
      }
      continue;
    }
    if (raw.find('-') != std::string::npos) {
      push_unique(prompts::parse_condition_code(raw));  // explicit style wins
      continue;
    }
    const auto parsed = prompts::parse_condition_code(raw);
    for (const auto kind : styles) {
      prompts::ConditionCode code = parsed;
      code.style = kind;
      push_unique(code);
    }
  }
  require(!out.empty(), Status::InvalidArgument, "no conditions selected");
  return out;
}

std::uint64_t trial_seed(std::uint64_t master_seed,
                         const std::string& condition_canonical,
                         int replication) {
  std::uint64_t h = rng::mix(master_seed);
  h = rng::mix(h ^ rng::fnv1a64(condition_canonical));
  h = rng::mix(h ^ static_cast<std::uint64_t>(replication));
  return h;
}

std::vector<TrialKey> expand_plan(const ExperimentPlan& plan) {
  plan.validate();
  std::vector<TrialKey> out;
  out.reserve(plan.conditions.size() *
              static_cast<std::size_t>(plan.replications));
  for (const auto& condition : plan.conditions) {
    const std::string canonical = condition.canonical();
    for (int rep = 0; rep < plan.replications; ++rep) {
      TrialKey key;
      key.condition = condition;
      key.replication = rep;
      key.seed = trial_seed(plan.master_seed, canonical, rep);
      key.trial_id = make_trial_id(condition, rep);
      out.push_back(std::move(key));
    }
  }
  return out;
}

namespace {

json run_one_trial(const ExperimentPlan& plan, const TrialKey& key,
                   llm::Client* client) {
  const auto started = std::chrono::steady_clock::now();
  const game::GameConfig config =
      config_for_condition(plan.base_game, key.condition);
  const bool is_llm = plan.agent.kind == agents::AgentSpec::Kind::Llm;

  json record;
  record["trial_id"] = key.trial_id;
  record["condition"] = key.condition.canonical();
  record["replication"] = key.replication;
  record["seed"] = key.seed;
  record["prng"] = std::string(rng::kPrngName);

  auto agent = agents::make_agent(plan.agent, config.betting.kind,
                                  rng::mix(key.seed ^ kPolicyStreamSalt),
                                  client);
  rng::Stream draws(key.seed);
  game::GameState state = game::new_game(config, key.seed);

  json rounds = json::array();
  json final_decision;
  long fallback_quits = 0;
  std::string abort_error;

  try {
    while (state.status == game::GameStatus::Active) {
      const auto range = game::legal_bet_range(state, config);
      require(range.has_value(), Status::Internal,
              "active state without a legal bet range");

      agents::StateView view;
      view.balance = state.balance;
      view.history = state.history;
      view.consecutive_losses = state.consecutive_losses;
      view.consecutive_wins = game::consecutive_wins(state);
      view.round = state.round;

      std::string prompt;
      if (is_llm) {
        prompts::PromptSpec spec;
        spec.condition = key.condition;
        spec.balance = state.balance;
        spec.history = state.history;
        spec.consecutive_losses = state.consecutive_losses;
        prompt = prompts::compose(spec, config);
      }

      const agents::Decision decision = agent->decide(prompt, *range, view);
      if (decision.fallback) ++fallback_quits;
      if (decision.kind == agents::DecisionKind::Quit) {
        state = game::apply_quit(state);
        final_decision = serde::decision_to_json(decision);
        break;
      }
      state = game::resolve_bet(state, decision.amount, config,
                                draws.next_unit());
      json round = serde::round_record_to_json(state.history.back());
      round["decision"] = serde::decision_to_json(decision);
      rounds.push_back(std::move(round));
    }
  } catch (const Error& e) {
    if (e.code() != Status::AgentUnavailable) throw;
    abort_error = e.what();
  }

  record["rounds"] = std::move(rounds);
  if (!final_decision.is_null()) record["final_decision"] = final_decision;
  if (fallback_quits > 0) record["fallback_quits"] = fallback_quits;

  if (!abort_error.empty()) {
    record["status"] = "aborted";
    record["error"] = abort_error;
  } else {
    // Accounting identity, asserted on every persisted game.
    double net = 0.0;
    for (const auto& r : state.history) net += r.payout - r.bet;
    require(std::abs(state.balance - (config.initial_balance + net)) <= 1e-9,
            Status::Internal, "transcript violates the accounting identity");
    record["status"] = "completed";
    record["end_status"] = game::to_string(state.status);
    record["metrics"] = serde::transcript_metrics_to_json(
        metrics::irrationality_index(state.history, state.status, plan.weights));
  }
  record["wall_time_ms"] =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - started)
          .count();
  return record;
}

json manifest_for_plan(const ExperimentPlan& plan) {
  auto conditions = json::array();
  for (const auto& c : plan.conditions) conditions.push_back(c.canonical());
  char hash_hex[32];
  std::snprintf(hash_hex, sizeof(hash_hex), "fnv1a64:%016llx",
                static_cast<unsigned long long>(
                    prompts::TemplateSet::defaults().content_hash()));
  return json{{"format", "slotlab-experiment/v1"},
              {"tool_version", kVersion},
              {"prng", std::string(rng::kPrngName)},
              {"seed_algo", std::string(rng::kSeedAlgoName)},
              {"master_seed", plan.master_seed},
              {"replications", plan.replications},
              {"conditions", std::move(conditions)},
              {"agent", serde::agent_spec_to_json(plan.agent)},
              {"game", serde::game_config_to_json(plan.base_game)},
              {"weights", serde::weights_to_json(plan.weights)},
              {"template_hash", hash_hex}};
}

// Reads trial ids already on disk. A torn final line (killed mid-append) is
// truncated away so the rerun rewrites that trial.
std::set<std::string> scan_existing_trials(const std::filesystem::path& path) {
  std::set<std::string> done;
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) return done;

  std::string line;
  std::uintmax_t good_bytes = 0;
  bool torn = false;
  while (std::getline(in, line)) {
    const bool has_newline = !in.eof();
    try {
      const json record = json::parse(line);
      done.insert(record.at("trial_id").get<std::string>());
    } catch (const json::exception&) {
      require(!has_newline, Status::FormatError,
              "corrupt transcript line mid-file in " + path.string());
      torn = true;
      break;
    }
    if (!has_newline) break;
    good_bytes += line.size() + 1;
  }
  in.close();
  if (torn) {
    std::filesystem::resize_file(path, good_bytes);
  }
  return done;
}

}  // namespace

json RunSummary::to_json() const {
  return json{{"planned", planned},
              {"skipped_existing", skipped_existing},
              {"executed", executed},
              {"completed", completed},
              {"aborted", aborted},
              {"fallback_quits", fallback_quits},
              {"directory", directory.string()}};
}

RunSummary run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  std::filesystem::create_directories(plan.output_dir);
  const auto manifest_path = plan.output_dir / "manifest.json";
  const json manifest = manifest_for_plan(plan);
  if (std::filesystem::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    json existing;
    try {
      in >> existing;
    } catch (const json::exception& e) {
      raise(Status::FormatError,
            std::string("unreadable manifest: ") + e.what());
    }
    require(existing == manifest, Status::OutputConflict,
            "output directory holds a different experiment (manifest "
            "mismatch): " +
                manifest_path.string());
  } else {
    std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
    out << manifest.dump(2) << '\n';
    require(out.good(), Status::IoError,
            "cannot write manifest: " + manifest_path.string());
  }

  const auto trials_path = plan.output_dir / "trials.jsonl";
  const std::set<std::string> done = scan_existing_trials(trials_path);

  const std::vector<TrialKey> all = expand_plan(plan);
  std::vector<const TrialKey*> pending;
  for (const auto& key : all) {
    if (!done.contains(key.trial_id)) pending.push_back(&key);
  }

  RunSummary summary;
  summary.planned = static_cast<long>(all.size());
  summary.skipped_existing = static_cast<long>(all.size() - pending.size());
  summary.directory = plan.output_dir;
  if (plan.stop_after > 0 &&
      pending.size() > static_cast<std::size_t>(plan.stop_after)) {
    pending.resize(static_cast<std::size_t>(plan.stop_after));
  }
  if (pending.empty()) return summary;

  std::unique_ptr<llm::Client> client;
  if (plan.agent.kind == agents::AgentSpec::Kind::Llm) {
    client = std::make_unique<llm::Client>(plan.agent.llm,
                                           plan.llm_parallel_limit);
  }

  std::ofstream out(trials_path, std::ios::binary | std::ios::app);
  require(out.good(), Status::IoError,
          "cannot open transcript file: " + trials_path.string());

  std::mutex mu;
  std::map<std::size_t, json> finished;  // pending-index -> record
  std::size_t write_cursor = 0;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;

  auto drain_locked = [&]() {
    while (true) {
      const auto it = finished.find(write_cursor);
      if (it == finished.end()) break;
      out << it->second.dump() << '\n';
      out.flush();
      if (it->second["status"] == "completed") {
        ++summary.completed;
      } else {
        ++summary.aborted;
      }
      summary.fallback_quits += it->second.value("fallback_quits", 0L);
      ++summary.executed;
      finished.erase(it);
      ++write_cursor;
    }
  };

  std::atomic<bool> stop{false};
  auto worker = [&]() {
    while (!stop.load(std::memory_order_relaxed)) {
      const std::size_t index = next.fetch_add(1);
      if (index >= pending.size()) return;
      json record;
      try {
        record = run_one_trial(plan, *pending[index], client.get());
      } catch (...) {
        stop.store(true, std::memory_order_relaxed);
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
      std::lock_guard lock(mu);
      finished.emplace(index, std::move(record));
      drain_locked();
    }
  };

  const int n_workers = static_cast<int>(
      std::min<std::size_t>(pending.size(),
                            static_cast<std::size_t>(plan.parallel_limit)));
  std::vector<std::thread> threads;
  threads.reserve(n_workers);
  for (int i = 0; i < n_workers; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  require(out.good(), Status::IoError,
          "transcript write failed: " + trials_path.string());
  return summary;
}

json load_trial(const std::filesystem::path& dir, const std::string& trial_id) {
  const auto trials_path = dir / "trials.jsonl";
  std::ifstream in(trials_path, std::ios::binary);
  require(in.good(), Status::IoError, "cannot open " + trials_path.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception&) {
      continue;  // torn tail
    }
    if (record.value("trial_id", "") == trial_id) return record;
  }
  raise(Status::InvalidArgument, "trial not found: " + trial_id);
}

namespace {

// Feeds back the decisions recorded for an LLM trial: game dynamics are
// recomputed, audit fields come from the record.
class RecordedAgent final : public agents::Agent {
 public:
  explicit RecordedAgent(const json& record,
                         game::BettingStyle::Kind style)
      : style_(style) {
    for (const auto& round : record.at("rounds")) {
      decisions_.push_back(serde::decision_from_json(round.at("decision")));
    }
    if (record.contains("final_decision")) {
      decisions_.push_back(
          serde::decision_from_json(record.at("final_decision")));
    }
  }

  agents::Decision decide(const std::string&, const game::BetRange& range,
                          const agents::StateView&) override {
    require(cursor_ < decisions_.size(), Status::Internal,
            "replay ran past the recorded decisions");
    agents::Decision recorded = decisions_[cursor_++];
    if (recorded.fallback || recorded.raw_response.empty()) {
      return recorded;  // fallback quits and bare decisions replay verbatim
    }
    auto parsed =
        agents::parse_decision(recorded.raw_response, range, style_);
    require(parsed.has_value(), Status::Internal,
            "recorded raw response no longer parses");
    // Audit fields carry over; only the game dynamics are recomputed.
    parsed->parse_attempts = recorded.parse_attempts;
    parsed->llm = recorded.llm;
    return *parsed;
  }

 private:
  std::vector<agents::Decision> decisions_;
  std::size_t cursor_ = 0;
  game::BettingStyle::Kind style_;
};

ExperimentPlan plan_from_manifest(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path);
  require(in.good(), Status::IoError,
          "cannot open manifest: " + manifest_path.string());
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    raise(Status::FormatError, std::string("unreadable manifest: ") + e.what());
  }
  ExperimentPlan plan;
  plan.agent = serde::agent_spec_from_json(manifest.at("agent"));
  plan.master_seed = manifest.at("master_seed").get<std::uint64_t>();
  plan.replications = manifest.at("replications").get<int>();
  plan.base_game = serde::game_config_from_json(manifest.at("game"));
  plan.weights = serde::weights_from_json(manifest.at("weights"));
  plan.output_dir = dir;
  for (const auto& c : manifest.at("conditions")) {
    plan.conditions.push_back(
        prompts::parse_condition_code(c.get<std::string>()));
  }
  return plan;
}

}  // namespace

json replay_trial(const std::filesystem::path& dir,
                  const std::string& trial_id) {
  const ExperimentPlan plan = plan_from_manifest(dir);
  const json original = load_trial(dir, trial_id);

  TrialKey key;
  key.condition =
      prompts::parse_condition_code(original.at("condition").get<std::string>());
  key.replication = original.at("replication").get<int>();
  key.seed = original.at("seed").get<std::uint64_t>();
  key.trial_id = trial_id;
  require(key.seed == trial_seed(plan.master_seed, key.condition.canonical(),
                                 key.replication),
          Status::FormatError, "recorded seed disagrees with the manifest");

  if (plan.agent.kind != agents::AgentSpec::Kind::Llm) {
    return run_one_trial(plan, key, nullptr);
  }

  // LLM trials: replay decisions from the stored raw responses.
  const game::GameConfig config =
      config_for_condition(plan.base_game, key.condition);
  RecordedAgent agent(original, config.betting.kind);
  rng::Stream draws(key.seed);
  game::GameState state = game::new_game(config, key.seed);

  json record;
  record["trial_id"] = key.trial_id;
  record["condition"] = key.condition.canonical();
  record["replication"] = key.replication;
  record["seed"] = key.seed;
  record["prng"] = std::string(rng::kPrngName);
  json rounds = json::array();
  json final_decision;
  long fallback_quits = 0;

  while (state.status == game::GameStatus::Active) {
    const auto range = game::legal_bet_range(state, config);
    require(range.has_value(), Status::Internal,
            "active state without a legal bet range");
    agents::StateView view;
    const agents::Decision decision = agent.decide("", *range, view);
    if (decision.fallback) ++fallback_quits;
    if (decision.kind == agents::DecisionKind::Quit) {
      state = game::apply_quit(state);
      final_decision = serde::decision_to_json(decision);
      break;
    }
    state = game::resolve_bet(state, decision.amount, config, draws.next_unit());
    json round = serde::round_record_to_json(state.history.back());
    round["decision"] = serde::decision_to_json(decision);
    rounds.push_back(std::move(round));
  }

  record["rounds"] = std::move(rounds);
  if (!final_decision.is_null()) record["final_decision"] = final_decision;
  if (fallback_quits > 0) record["fallback_quits"] = fallback_quits;
  record["status"] = "completed";
  record["end_status"] = game::to_string(state.status);
  record["metrics"] = serde::transcript_metrics_to_json(
      metrics::irrationality_index(state.history, state.status, plan.weights));
  record["wall_time_ms"] = 0.0;
  return record;
}

}  // namespace slotlab::runner
