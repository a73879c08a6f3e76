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

#include "slotlab/game.hpp"

#include <algorithm>
#include <cmath>

namespace slotlab::game {

void GameConfig::validate() const {
  require(win_prob >= 0.0 && win_prob <= 1.0, Status::InvalidArgument,
          "win_prob must lie in [0,1]");
  require(payout_mult > 0.0, Status::InvalidArgument,
          "payout_mult must be positive");
  require(initial_balance > 0.0, Status::InvalidArgument,
          "initial_balance must be positive");
  require(max_rounds >= 1, Status::InvalidArgument, "max_rounds must be >= 1");
  require(history_window >= 0, Status::InvalidArgument,
          "history_window must be >= 0");
  if (betting.kind == BettingStyle::Kind::Fixed) {
    require(betting.fixed_amount > 0.0, Status::InvalidArgument,
            "fixed stake must be positive");
  } else {
    require(betting.min > 0.0, Status::InvalidArgument,
            "variable minimum stake must be positive");
    require(betting.min <= betting.max, Status::InvalidArgument,
            "variable betting requires min <= max");
  }
}

GameState new_game(const GameConfig& config, std::uint64_t seed) {
  config.validate();
  GameState state;
  state.balance = config.initial_balance;
  state.rng_seed = seed;
  // An initial balance below the minimum stake is playable by nobody.
  if (state.balance < config.betting.minimum_stake()) {
    state.status = GameStatus::Bankrupt;
  }
  return state;
}

std::optional<BetRange> legal_bet_range(const GameState& state,
                                        const GameConfig& config) {
  const BettingStyle& style = config.betting;
  if (style.kind == BettingStyle::Kind::Fixed) {
    if (state.balance < style.fixed_amount) return std::nullopt;
    return BetRange{style.fixed_amount, style.fixed_amount};
  }
  if (state.balance < style.min) return std::nullopt;
  const double upper =
      style.allow_all_in ? state.balance : std::min(style.max, state.balance);
  return BetRange{style.min, upper};
}

GameState resolve_bet(const GameState& state, double bet,
                      const GameConfig& config, double draw) {
  require(state.status == GameStatus::Active, Status::StateNotActive,
          "resolve_bet requires an active game");
  require(draw >= 0.0 && draw < 1.0, Status::InvalidArgument,
          "draw must lie in [0,1)");
  const auto range = legal_bet_range(state, config);
  require(range.has_value(), Status::IllegalBet,
          "no legal bet remains; the game should already be bankrupt");
  require(bet >= range->min && bet <= range->max, Status::IllegalBet,
          "bet outside the legal range");

  const bool win = draw < config.win_prob;
  RoundRecord record;
  record.round_index = state.round + 1;
  record.balance_before = state.balance;
  record.bet = bet;
  record.outcome = win ? Outcome::Win : Outcome::Loss;
  record.payout = win ? config.payout_mult * bet : 0.0;
  record.balance_after = state.balance - bet + record.payout;

  GameState next = state;
  next.balance = record.balance_after;
  next.round = record.round_index;
  next.history.push_back(record);
  next.consecutive_losses = win ? 0 : state.consecutive_losses + 1;

  if (!legal_bet_range(next, config).has_value()) {
    next.status = GameStatus::Bankrupt;
  } else if (next.round >= config.max_rounds) {
    next.status = GameStatus::RoundCapped;
  } else {
    next.status = GameStatus::Active;
  }
  return next;
}

GameState apply_quit(const GameState& state) {
  require(state.status == GameStatus::Active, Status::StateNotActive,
          "apply_quit requires an active game");
  GameState next = state;
  next.status = GameStatus::Quit;
  return next;
}

int consecutive_wins(const GameState& state) {
  int wins = 0;
  for (auto it = state.history.rbegin(); it != state.history.rend(); ++it) {
    if (it->outcome != Outcome::Win) break;
    ++wins;
  }
  return wins;
}

const char* to_string(Outcome o) {
  return o == Outcome::Win ? "win" : "loss";
}

const char* to_string(GameStatus s) {
  switch (s) {
    case GameStatus::Active:
      return "active";
    case GameStatus::Quit:
      return "quit";
    case GameStatus::Bankrupt:
      return "bankrupt";
    case GameStatus::RoundCapped:
      return "round_capped";
  }
  return "unknown";
}

Outcome outcome_from_string(const std::string& s) {
  if (s == "win") return Outcome::Win;
  if (s == "loss") return Outcome::Loss;
  raise(Status::FormatError, "unknown outcome: " + s);
}

GameStatus status_from_string(const std::string& s) {
  if (s == "active") return GameStatus::Active;
  if (s == "quit") return GameStatus::Quit;
  if (s == "bankrupt") return GameStatus::Bankrupt;
  if (s == "round_capped") return GameStatus::RoundCapped;
  raise(Status::FormatError, "unknown game status: " + s);
}

}  // namespace slotlab::game
