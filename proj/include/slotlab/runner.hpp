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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "slotlab/agents.hpp"
#include "slotlab/metrics.hpp"
#include "slotlab/prompts.hpp"
#include "slotlab/stats.hpp"

namespace slotlab::runner {

struct ExperimentPlan {
  agents::AgentSpec agent;
  std::vector<prompts::ConditionCode> conditions;  // nonempty, duplicate-free
  int replications = 50;
  std::uint64_t master_seed = 0;
  std::filesystem::path output_dir;
  int parallel_limit = 1;
  int llm_parallel_limit = 4;  // in-flight request cap, independent of workers
  game::GameConfig base_game;  // betting style is overridden per condition
  metrics::Weights weights;
  long stop_after = 0;  // execute at most N pending trials this invocation

  void validate() const;
};

// All 64 conditions: 32 compositions x {fixed, variable}.
std::vector<prompts::ConditionCode> default_conditions();

// Expands condition arguments: each entry is "all", a composition ("BASE",
// "GPW"), or a full condition code ("GPW-fixed"). Suffix-free entries fan out
// over `style` in {"fixed","variable","both"}.
std::vector<prompts::ConditionCode> expand_condition_args(
    const std::vector<std::string>& entries, const std::string& style);

// Stable per-trial seed: any subset of the plan re-runs identically, in any
// order, on any worker count.
std::uint64_t trial_seed(std::uint64_t master_seed,
                         const std::string& condition_canonical,
                         int replication);

struct TrialKey {
  prompts::ConditionCode condition;
  int replication = 0;
  std::uint64_t seed = 0;
  std::string trial_id;  // "<condition>/r<replication, zero-padded>"
};

std::vector<TrialKey> expand_plan(const ExperimentPlan& plan);

struct RunSummary {
  long planned = 0;
  long skipped_existing = 0;  // resume: trial_ids already on disk
  long executed = 0;
  long completed = 0;
  long aborted = 0;
  long fallback_quits = 0;
  std::filesystem::path directory;

  nlohmann::json to_json() const;
};

// Runs every pending trial of the plan, appending one JSON line per trial to
// <output_dir>/trials.jsonl in plan order (flushed line-by-line, so a killed
// run resumes where it stopped). A manifest pins the plan; rerunning with a
// different plan in the same directory is an OutputConflict.
RunSummary run_experiment(const ExperimentPlan& plan);

// Re-executes one recorded trial and returns the freshly built record.
// Deterministic agents are fully re-simulated from the recorded seed; LLM
// trials are replayed from the stored raw responses.
nlohmann::json replay_trial(const std::filesystem::path& dir,
                            const std::string& trial_id);

nlohmann::json load_trial(const std::filesystem::path& dir,
                          const std::string& trial_id);

// ---- Aggregation -----------------------------------------------------------

struct BehaviorSummary {
  long n_games = 0;
  double bankruptcy_rate = 0.0, bankruptcy_se = 0.0;
  double mean_index = 0.0, index_se = 0.0;
  double mean_rounds = 0.0, rounds_se = 0.0;
  double mean_total_bet = 0.0, total_bet_se = 0.0;
  double mean_net_pl = 0.0, net_pl_se = 0.0;
  long n_quit = 0, n_bankrupt = 0, n_round_capped = 0, n_zero_rounds = 0;
};

struct ConditionAggregate {
  prompts::ConditionCode condition;
  BehaviorSummary summary;
};

struct ExperimentAggregate {
  std::vector<ConditionAggregate> per_condition;       // plan-condition order
  std::map<std::string, BehaviorSummary> per_style;    // "fixed"/"variable"
  BehaviorSummary overall;
  metrics::StreakStats streaks;
  long n_completed = 0, n_aborted = 0, n_fallback_quits = 0;
  metrics::Weights weights;
};

ExperimentAggregate aggregate(const std::filesystem::path& dir);
nlohmann::json aggregate_to_json(const ExperimentAggregate& agg);

// ---- Reports ---------------------------------------------------------------
//
// kind: table2 | scatter | components | complexity | streaks (long-form
// aliases like component_effects accepted). Writes CSV files under
// <dir>/reports and returns their paths.
std::vector<std::filesystem::path> report(const std::filesystem::path& dir,
                                          std::string_view kind);

// Reference summary rows reported for the original four commercial-model
// experiments; shipped for side-by-side comparison, never asserted by tests.
struct ReferenceSummaryRow {
  const char* model;
  const char* style;
  double bankrupt_pct, bankrupt_se_pct;
  double index, index_se;
  double rounds, rounds_se;
  double total_bet, total_bet_se;
  double net_pl, net_pl_se;
};
std::span<const ReferenceSummaryRow> reference_summary_rows();

}  // namespace slotlab::runner
