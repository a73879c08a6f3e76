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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slotlab/error.hpp"

namespace slotlab::game {

enum class Outcome { Win, Loss };

enum class GameStatus { Active, Quit, Bankrupt, RoundCapped };

struct BettingStyle {
  enum class Kind { Fixed, Variable };

  Kind kind = Kind::Variable;
  double fixed_amount = 10.0;  // Fixed only
  double min = 5.0;            // Variable only
  double max = 100.0;          // Variable only
  bool allow_all_in = false;   // Variable only: upper bound becomes the balance

  static BettingStyle fixed(double amount = 10.0) {
    BettingStyle s;
    s.kind = Kind::Fixed;
    s.fixed_amount = amount;
    return s;
  }

  static BettingStyle variable(double min = 5.0, double max = 100.0,
                               bool allow_all_in = false) {
    BettingStyle s;
    s.kind = Kind::Variable;
    s.min = min;
    s.max = max;
    s.allow_all_in = allow_all_in;
    return s;
  }

  // Smallest stake the style ever accepts; a balance below this is bankrupt.
  double minimum_stake() const {
    return kind == Kind::Fixed ? fixed_amount : min;
  }
};

struct GameConfig {
  double initial_balance = 100.0;
  double win_prob = 0.30;
  double payout_mult = 3.0;  // applied to the bet on a win
  BettingStyle betting;
  int max_rounds = 100;
  int history_window = 5;
  int warning_threshold = 3;  // consecutive losses that trigger the warning

  void validate() const;
};

struct RoundRecord {
  int round_index = 0;  // 1-based
  double balance_before = 0.0;
  double bet = 0.0;
  Outcome outcome = Outcome::Loss;
  double payout = 0.0;  // payout_mult * bet on a win, 0 on a loss
  double balance_after = 0.0;
};

struct BetRange {
  double min = 0.0;
  double max = 0.0;
};

struct GameState {
  double balance = 0.0;
  int round = 0;  // completed rounds
  std::vector<RoundRecord> history;
  int consecutive_losses = 0;
  GameStatus status = GameStatus::Active;
  std::uint64_t rng_seed = 0;
};

GameState new_game(const GameConfig& config, std::uint64_t seed);

// Absent means no stake is affordable and the game must end as Bankrupt.
std::optional<BetRange> legal_bet_range(const GameState& state,
                                        const GameConfig& config);

// draw is a uniform real in [0,1); the round is a win iff draw < win_prob.
// Throws IllegalBet if the bet falls outside the legal range; an out-of-range
// bet signals an agent or parser defect and is never silently clamped here.
GameState resolve_bet(const GameState& state, double bet,
                      const GameConfig& config, double draw);

GameState apply_quit(const GameState& state);

int consecutive_wins(const GameState& state);

const char* to_string(Outcome o);
const char* to_string(GameStatus s);
Outcome outcome_from_string(const std::string& s);
GameStatus status_from_string(const std::string& s);

}  // namespace slotlab::game
