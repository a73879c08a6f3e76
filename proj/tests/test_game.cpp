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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "slotlab/game.hpp"
#include "slotlab/rng.hpp"

using namespace slotlab;
using game::BettingStyle;
using game::GameConfig;
using game::GameState;
using game::GameStatus;
using game::Outcome;

namespace {

GameConfig fixed_config(double stake = 10.0) {
  GameConfig config;
  config.betting = BettingStyle::fixed(stake);
  return config;
}

GameConfig variable_config(bool allow_all_in = false) {
  GameConfig config;
  config.betting = BettingStyle::variable(5.0, 100.0, allow_all_in);
  return config;
}

}  // namespace

TEST_CASE("legal bet range: fixed style") {
  const auto config = fixed_config();
  auto state = game::new_game(config, 1);
  const auto range = game::legal_bet_range(state, config);
  REQUIRE(range.has_value());
  CHECK(range->min == 10.0);
  CHECK(range->max == 10.0);

  state.balance = 9.99;
  CHECK_FALSE(game::legal_bet_range(state, config).has_value());
}

TEST_CASE("legal bet range: variable style") {
  const auto config = variable_config();
  auto state = game::new_game(config, 1);
  auto range = game::legal_bet_range(state, config);
  REQUIRE(range.has_value());
  CHECK(range->min == 5.0);
  CHECK(range->max == 100.0);  // min(max, balance) with balance 100

  state.balance = 3.0;
  CHECK_FALSE(game::legal_bet_range(state, config).has_value());

  state.balance = 60.0;
  range = game::legal_bet_range(state, config);
  REQUIRE(range.has_value());
  CHECK(range->max == 60.0);
}

TEST_CASE("legal bet range: all-in lifts the cap to the balance") {
  const auto config = variable_config(true);
  auto state = game::new_game(config, 1);
  state.balance = 260.0;
  const auto range = game::legal_bet_range(state, config);
  REQUIRE(range.has_value());
  CHECK(range->min == 5.0);
  CHECK(range->max == 260.0);
}

TEST_CASE("resolve_bet pays 3x on a win and nothing on a loss") {
  const auto config = variable_config();
  const auto state = game::new_game(config, 1);

  // draw 0.1 < 0.3 -> win: 100 - 20 + 60 = 140
  auto next = game::resolve_bet(state, 20.0, config, 0.1);
  CHECK(next.balance == 140.0);
  CHECK(next.round == 1);
  CHECK(next.consecutive_losses == 0);
  CHECK(next.history.back().outcome == Outcome::Win);
  CHECK(next.history.back().payout == 60.0);

  // draw 0.9 -> loss: 100 - 20 = 80
  next = game::resolve_bet(state, 20.0, config, 0.9);
  CHECK(next.balance == 80.0);
  CHECK(next.consecutive_losses == 1);
  CHECK(next.history.back().payout == 0.0);
}

TEST_CASE("win is strict: draw exactly at win_prob loses") {
  const auto config = variable_config();
  const auto state = game::new_game(config, 1);
  const auto next = game::resolve_bet(state, 10.0, config, 0.3);
  CHECK(next.history.back().outcome == Outcome::Loss);
}

TEST_CASE("illegal bets are rejected, not clamped") {
  const auto config = variable_config();
  const auto state = game::new_game(config, 1);
  CHECK_THROWS_WITH_AS(game::resolve_bet(state, 4.0, config, 0.5),
                       "bet outside the legal range", Error);
  CHECK_THROWS_AS(game::resolve_bet(state, 101.0, config, 0.5), Error);
  try {
    game::resolve_bet(state, 4.0, config, 0.5);
  } catch (const Error& e) {
    CHECK(e.code() == Status::IllegalBet);
  }
}

TEST_CASE("quit freezes the balance") {
  const auto config = variable_config();
  auto state = game::new_game(config, 1);
  state.balance = 130.0;
  const auto quit = game::apply_quit(state);
  CHECK(quit.status == GameStatus::Quit);
  CHECK(quit.balance == 130.0);

  // Quit with no bets keeps the initial balance.
  const auto fresh = game::apply_quit(game::new_game(config, 1));
  CHECK(fresh.balance == 100.0);
  CHECK(fresh.round == 0);
}

TEST_CASE("terminal states reject further moves") {
  const auto config = variable_config();
  auto state = game::new_game(config, 1);
  state.status = GameStatus::Bankrupt;
  CHECK_THROWS_AS(game::apply_quit(state), Error);
  CHECK_THROWS_AS(game::resolve_bet(state, 10.0, config, 0.5), Error);
  try {
    game::apply_quit(state);
  } catch (const Error& e) {
    CHECK(e.code() == Status::StateNotActive);
  }
}

TEST_CASE("bankruptcy means balance below the minimum stake") {
  const auto config = variable_config();
  auto state = game::new_game(config, 1);
  state.balance = 7.0;
  // Losing a $5 bet leaves $2 < min stake $5: bankrupt with money stranded.
  const auto next = game::resolve_bet(state, 5.0, config, 0.99);
  CHECK(next.status == GameStatus::Bankrupt);
  CHECK(next.balance == 2.0);
}

TEST_CASE("round cap terminates games") {
  auto config = variable_config();
  config.max_rounds = 3;
  auto state = game::new_game(config, 1);
  for (int i = 0; i < 3; ++i) {
    CHECK(state.status == GameStatus::Active);
    state = game::resolve_bet(state, 5.0, config, 0.0);  // always win
  }
  CHECK(state.status == GameStatus::RoundCapped);
  CHECK(state.round == 3);
}

TEST_CASE("bankruptcy takes precedence over the round cap") {
  auto config = fixed_config();
  config.max_rounds = 1;
  auto state = game::new_game(config, 1);
  state.balance = 10.0;
  const auto next = game::resolve_bet(state, 10.0, config, 0.9);
  CHECK(next.status == GameStatus::Bankrupt);
}

TEST_CASE("accounting identity holds over random games") {
  const auto config = variable_config(true);
  rng::Stream driver(2024);
  for (int g = 0; g < 200; ++g) {
    auto state = game::new_game(config, g);
    rng::Stream draws(g);
    while (state.status == GameStatus::Active && state.round < 60) {
      const auto range = game::legal_bet_range(state, config);
      REQUIRE(range.has_value());
      const double span = range->max - range->min;
      const double bet = range->min + std::floor(driver.next_unit() * span);
      state = game::resolve_bet(state, bet, config, draws.next_unit());
    }
    double net = 0.0;
    int losses_in_a_row = 0;
    for (const auto& r : state.history) {
      net += r.payout - r.bet;
      losses_in_a_row = r.outcome == Outcome::Loss ? losses_in_a_row + 1 : 0;
      CHECK(r.balance_after == doctest::Approx(r.balance_before - r.bet + r.payout));
    }
    CHECK(state.balance == doctest::Approx(config.initial_balance + net));
    CHECK(state.consecutive_losses == losses_in_a_row);
    CHECK(state.balance >= 0.0);
  }
}

TEST_CASE("identical seeds and decisions give identical transcripts") {
  const auto config = variable_config();
  auto play = [&config](std::uint64_t seed) {
    auto state = game::new_game(config, seed);
    rng::Stream draws(seed);
    rng::Stream bets(seed ^ 0xABCDEF);
    while (state.status == GameStatus::Active && state.round < 40) {
      const auto range = game::legal_bet_range(state, config);
      const double bet =
          range->min + std::floor(bets.next_unit() * (range->max - range->min));
      state = game::resolve_bet(state, bet, config, draws.next_unit());
    }
    return state;
  };
  const auto a = play(99);
  const auto b = play(99);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].bet == b.history[i].bet);
    CHECK(a.history[i].outcome == b.history[i].outcome);
    CHECK(a.history[i].balance_after == b.history[i].balance_after);
  }
  CHECK(a.balance == b.balance);
  CHECK(a.status == b.status);
}

TEST_CASE("all-in bankruptcy probability is 1 - 0.3^R at cap R") {
  // Survival requires R straight wins, so each added round multiplies the
  // survival chance by 0.3.
  for (const int cap : {1, 2, 3}) {
    auto config = variable_config(true);
    config.max_rounds = cap;
    const int n = 2000;
    int bankrupt = 0;
    for (int g = 0; g < n; ++g) {
      auto state = game::new_game(config, rng::mix(cap * 7919 + g));
      rng::Stream draws(rng::mix(cap * 7919 + g));
      while (state.status == GameStatus::Active) {
        const auto range = game::legal_bet_range(state, config);
        state = game::resolve_bet(state, range->max, config, draws.next_unit());
      }
      if (state.status == GameStatus::Bankrupt) ++bankrupt;
    }
    const double expected = 1.0 - std::pow(0.3, cap);
    const double ci = 2.576 * std::sqrt(expected * (1.0 - expected) / n);
    CHECK(std::abs(static_cast<double>(bankrupt) / n - expected) <= ci);
  }
}

TEST_CASE("per-round expected net is -10% of the stake") {
  // Monte-Carlo check of the analytic expectation (0.3 * 3 - 1) * bet.
  const auto config = variable_config();
  rng::Stream draws(555);
  const double bet = 10.0;
  double net = 0.0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    const bool win = draws.next_unit() < config.win_prob;
    net += win ? (config.payout_mult - 1.0) * bet : -bet;
  }
  CHECK(net / n == doctest::Approx(-0.1 * bet).epsilon(0.02));
}

TEST_CASE("config validation rejects nonsense") {
  GameConfig config;
  config.win_prob = 1.5;
  CHECK_THROWS_AS(config.validate(), Error);
  config = GameConfig{};
  config.betting = BettingStyle::variable(50.0, 10.0);
  CHECK_THROWS_AS(config.validate(), Error);
  config = GameConfig{};
  config.max_rounds = 0;
  CHECK_THROWS_AS(config.validate(), Error);
}
