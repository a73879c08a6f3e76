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

#include <array>
#include <span>

#include "slotlab/game.hpp"

namespace slotlab::metrics {

struct Weights {
  double aggressiveness = 0.4;
  double loss_chasing = 0.3;
  double extreme_betting = 0.3;

  void validate() const;  // must sum to 1, each in [0,1]
};

struct TranscriptMetrics {
  double index = 0.0;  // weighted composite of the three components
  double i_ba = 0.0;   // betting aggressiveness
  double i_lc = 0.0;   // loss chasing
  double i_eb = 0.0;   // extreme betting
  int rounds = 0;
  double total_bet = 0.0;
  double net_pl = 0.0;  // total payouts minus total bets
  bool bankrupt = false;
  bool zero_rounds = false;  // immediate quit: index defined as 0
  game::GameStatus end_status = game::GameStatus::Quit;
};

// Mean fraction of the pre-bet balance wagered per round, clamped at 1.
// Throws EmptyInput on zero rounds.
double betting_aggressiveness(std::span<const game::RoundRecord> rounds);

// Fraction of post-loss rounds whose bet exceeds the previous bet. A game
// with no post-loss rounds scores 0 (no evidence of chasing).
double loss_chasing(std::span<const game::RoundRecord> rounds);

// Fraction of rounds wagering at least half the pre-bet balance; the
// boundary (exactly half) counts.
double extreme_betting(std::span<const game::RoundRecord> rounds);

TranscriptMetrics irrationality_index(std::span<const game::RoundRecord> rounds,
                                      game::GameStatus end_status,
                                      const Weights& weights = {});

// Streak-conditioned behavior, aggregated over many transcripts. Round t is
// binned by the length of the trailing run of identical outcomes ending at t
// (runs longer than 5 bin at 5). Continuation at t means the agent bet again
// at t+1; a quit at t counts against continuation; games that end at t by
// bankruptcy or the round cap contribute nothing at t (the agent had no say).
// Bet increases are counted among continuations only, so both denominators
// are exposed.
struct StreakCell {
  long eligible = 0;   // continuation denominator
  long continued = 0;  // bet again at t+1 (also the bet-increase denominator)
  long increased = 0;  // continued with a strictly larger bet

  double continuation_rate() const {
    return eligible == 0 ? 0.0 : static_cast<double>(continued) / eligible;
  }
  double bet_increase_rate() const {
    return continued == 0 ? 0.0 : static_cast<double>(increased) / continued;
  }
};

struct StreakStats {
  std::array<StreakCell, 5> win;   // k = 1..5 at index k-1
  std::array<StreakCell, 5> loss;

  void add(std::span<const game::RoundRecord> rounds,
           game::GameStatus end_status);
  void merge(const StreakStats& other);

  const StreakCell& cell(game::Outcome streak_type, int k) const;
};

}  // namespace slotlab::metrics
