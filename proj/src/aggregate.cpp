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

#include <fstream>
#include <map>

#include "slotlab/runner.hpp"
#include "slotlab/serde.hpp"

namespace slotlab::runner {

using nlohmann::json;

namespace {

// Per-trial observations collected before reduction.
struct Bucket {
  std::vector<double> index;
  std::vector<double> rounds;
  std::vector<double> total_bet;
  std::vector<double> net_pl;
  long n_quit = 0, n_bankrupt = 0, n_round_capped = 0, n_zero_rounds = 0;

  void add(const metrics::TranscriptMetrics& m) {
    index.push_back(m.index);
    rounds.push_back(static_cast<double>(m.rounds));
    total_bet.push_back(m.total_bet);
    net_pl.push_back(m.net_pl);
    switch (m.end_status) {
      case game::GameStatus::Quit:
        ++n_quit;
        break;
      case game::GameStatus::Bankrupt:
        ++n_bankrupt;
        break;
      case game::GameStatus::RoundCapped:
        ++n_round_capped;
        break;
      case game::GameStatus::Active:
        break;
    }
    if (m.zero_rounds) ++n_zero_rounds;
  }

  BehaviorSummary reduce() const {
    BehaviorSummary s;
    s.n_games = static_cast<long>(index.size());
    if (s.n_games == 0) return s;
    s.bankruptcy_rate = static_cast<double>(n_bankrupt) / s.n_games;
    s.bankruptcy_se = stats::binomial_se(s.bankruptcy_rate, s.n_games);
    s.mean_index = stats::mean(index);
    s.index_se = stats::standard_error_of_mean(index);
    s.mean_rounds = stats::mean(rounds);
    s.rounds_se = stats::standard_error_of_mean(rounds);
    s.mean_total_bet = stats::mean(total_bet);
    s.total_bet_se = stats::standard_error_of_mean(total_bet);
    s.mean_net_pl = stats::mean(net_pl);
    s.net_pl_se = stats::standard_error_of_mean(net_pl);
    s.n_quit = n_quit;
    s.n_bankrupt = n_bankrupt;
    s.n_round_capped = n_round_capped;
    s.n_zero_rounds = n_zero_rounds;
    return s;
  }
};

json summary_to_json(const BehaviorSummary& s) {
  return json{{"n_games", s.n_games},
              {"bankruptcy_rate", s.bankruptcy_rate},
              {"bankruptcy_se", s.bankruptcy_se},
              {"mean_index", s.mean_index},
              {"index_se", s.index_se},
              {"mean_rounds", s.mean_rounds},
              {"rounds_se", s.rounds_se},
              {"mean_total_bet", s.mean_total_bet},
              {"total_bet_se", s.total_bet_se},
              {"mean_net_pl", s.mean_net_pl},
              {"net_pl_se", s.net_pl_se},
              {"n_quit", s.n_quit},
              {"n_bankrupt", s.n_bankrupt},
              {"n_round_capped", s.n_round_capped},
              {"n_zero_rounds", s.n_zero_rounds}};
}

}  // namespace

ExperimentAggregate aggregate(const std::filesystem::path& dir) {
  const auto trials_path = dir / "trials.jsonl";
  std::ifstream in(trials_path, std::ios::binary);
  require(in.good(), Status::IoError,
          "cannot open transcripts: " + trials_path.string());

  metrics::Weights weights;
  {
    std::ifstream min(dir / "manifest.json");
    if (min.good()) {
      json manifest;
      try {
        min >> manifest;
        if (manifest.contains("weights")) {
          weights = serde::weights_from_json(manifest["weights"]);
        }
      } catch (const json::exception&) {
        // No usable manifest: fall back to the default weights.
      }
    }
  }

  ExperimentAggregate agg;
  agg.weights = weights;
  std::map<std::string, Bucket> by_condition;
  std::map<std::string, Bucket> by_style;
  Bucket overall;

  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception&) {
      continue;  // torn tail line
    }
    agg.n_fallback_quits += record.value("fallback_quits", 0L);
    if (record.value("status", "") != "completed") {
      ++agg.n_aborted;
      continue;
    }
    ++agg.n_completed;

    std::vector<game::RoundRecord> rounds;
    for (const auto& rj : record.at("rounds")) {
      rounds.push_back(serde::round_record_from_json(rj));
    }
    const auto end_status =
        game::status_from_string(record.at("end_status").get<std::string>());
    const auto m = metrics::irrationality_index(rounds, end_status, weights);

    const std::string condition = record.at("condition").get<std::string>();
    by_condition[condition].add(m);
    const auto code = prompts::parse_condition_code(condition);
    by_style[code.style == game::BettingStyle::Kind::Fixed ? "fixed"
                                                           : "variable"]
        .add(m);
    overall.add(m);
    agg.streaks.add(rounds, end_status);
  }
  require(agg.n_completed > 0, Status::EmptyInput,
          "no completed trials in " + dir.string());

  for (const auto& [condition, bucket] : by_condition) {
    ConditionAggregate ca;
    ca.condition = prompts::parse_condition_code(condition);
    ca.summary = bucket.reduce();
    agg.per_condition.push_back(std::move(ca));
  }
  for (const auto& [style, bucket] : by_style) {
    agg.per_style[style] = bucket.reduce();
  }
  agg.overall = overall.reduce();
  return agg;
}

json aggregate_to_json(const ExperimentAggregate& agg) {
  json per_condition = json::array();
  for (const auto& ca : agg.per_condition) {
    json row = summary_to_json(ca.summary);
    row["condition"] = ca.condition.canonical();
    row["composition"] = ca.condition.composition();
    row["style"] = ca.condition.style == game::BettingStyle::Kind::Fixed
                       ? "fixed"
                       : "variable";
    row["n_components"] = ca.condition.component_count();
    per_condition.push_back(std::move(row));
  }
  json per_style;
  for (const auto& [style, summary] : agg.per_style) {
    per_style[style] = summary_to_json(summary);
  }

  json streaks = json::array();
  for (const auto outcome : {game::Outcome::Win, game::Outcome::Loss}) {
    for (int k = 1; k <= 5; ++k) {
      const auto& cell = agg.streaks.cell(outcome, k);
      streaks.push_back(json{{"streak_type", game::to_string(outcome)},
                             {"k", k},
                             {"eligible", cell.eligible},
                             {"continued", cell.continued},
                             {"increased", cell.increased},
                             {"continuation_rate", cell.continuation_rate()},
                             {"bet_increase_rate", cell.bet_increase_rate()}});
    }
  }

  return json{{"n_completed", agg.n_completed},
              {"n_aborted", agg.n_aborted},
              {"n_fallback_quits", agg.n_fallback_quits},
              {"weights", serde::weights_to_json(agg.weights)},
              {"overall", summary_to_json(agg.overall)},
              {"per_style", std::move(per_style)},
              {"per_condition", std::move(per_condition)},
              {"streaks", std::move(streaks)}};
}

}  // namespace slotlab::runner
