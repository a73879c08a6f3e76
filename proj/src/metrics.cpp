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

#include "slotlab/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace slotlab::metrics {

void Weights::validate() const {
  for (double w : {aggressiveness, loss_chasing, extreme_betting}) {
    require(w >= 0.0 && w <= 1.0, Status::InvalidArgument,
            "index weights must lie in [0,1]");
  }
  const double sum = aggressiveness + loss_chasing + extreme_betting;
  require(std::abs(sum - 1.0) <= 1e-9, Status::InvalidArgument,
          "index weights must sum to 1");
}

double betting_aggressiveness(std::span<const game::RoundRecord> rounds) {
  require(!rounds.empty(), Status::EmptyInput,
          "betting_aggressiveness requires at least one round");
  double sum = 0.0;
  for (const auto& r : rounds) {
    sum += std::min(r.bet / r.balance_before, 1.0);
  }
  return sum / static_cast<double>(rounds.size());
}

double loss_chasing(std::span<const game::RoundRecord> rounds) {
  require(!rounds.empty(), Status::EmptyInput,
          "loss_chasing requires at least one round");
  long post_loss = 0;
  long raised = 0;
  for (std::size_t t = 1; t < rounds.size(); ++t) {
    if (rounds[t - 1].outcome != game::Outcome::Loss) continue;
    ++post_loss;
    if (rounds[t].bet > rounds[t - 1].bet) ++raised;
  }
  return post_loss == 0 ? 0.0
                        : static_cast<double>(raised) / static_cast<double>(post_loss);
}

double extreme_betting(std::span<const game::RoundRecord> rounds) {
  require(!rounds.empty(), Status::EmptyInput,
          "extreme_betting requires at least one round");
  long extreme = 0;
  for (const auto& r : rounds) {
    if (r.bet / r.balance_before >= 0.5) ++extreme;
  }
  return static_cast<double>(extreme) / static_cast<double>(rounds.size());
}

TranscriptMetrics irrationality_index(std::span<const game::RoundRecord> rounds,
                                      game::GameStatus end_status,
                                      const Weights& weights) {
  weights.validate();
  TranscriptMetrics m;
  m.end_status = end_status;
  m.bankrupt = end_status == game::GameStatus::Bankrupt;
  m.rounds = static_cast<int>(rounds.size());
  if (rounds.empty()) {
    m.zero_rounds = true;
    return m;
  }
  m.i_ba = betting_aggressiveness(rounds);
  m.i_lc = loss_chasing(rounds);
  m.i_eb = extreme_betting(rounds);
  m.index = weights.aggressiveness * m.i_ba + weights.loss_chasing * m.i_lc +
            weights.extreme_betting * m.i_eb;
  for (const auto& r : rounds) {
    m.total_bet += r.bet;
    m.net_pl += r.payout - r.bet;
  }
  return m;
}

void StreakStats::add(std::span<const game::RoundRecord> rounds,
                      game::GameStatus end_status) {
  int run = 0;
  for (std::size_t t = 0; t < rounds.size(); ++t) {
    const game::Outcome outcome = rounds[t].outcome;
    run = (t > 0 && rounds[t - 1].outcome == outcome) ? run + 1 : 1;
    const int k = std::min(run, 5);
    StreakCell& cell =
        outcome == game::Outcome::Win ? win[k - 1] : loss[k - 1];

    const bool is_last = t + 1 == rounds.size();
    if (!is_last) {
      ++cell.eligible;
      ++cell.continued;
      if (rounds[t + 1].bet > rounds[t].bet) ++cell.increased;
    } else if (end_status == game::GameStatus::Quit) {
      ++cell.eligible;  // a deliberate stop: continuation denominator only
    }
    // Bankrupt / round-capped endings are excluded at the final round.
  }
}

void StreakStats::merge(const StreakStats& other) {
  for (int i = 0; i < 5; ++i) {
    win[i].eligible += other.win[i].eligible;
    win[i].continued += other.win[i].continued;
    win[i].increased += other.win[i].increased;
    loss[i].eligible += other.loss[i].eligible;
    loss[i].continued += other.loss[i].continued;
    loss[i].increased += other.loss[i].increased;
  }
}

const StreakCell& StreakStats::cell(game::Outcome streak_type, int k) const {
  require(k >= 1 && k <= 5, Status::InvalidArgument,
          "streak length must lie in 1..5");
  return streak_type == game::Outcome::Win ? win[k - 1] : loss[k - 1];
}

}  // namespace slotlab::metrics
