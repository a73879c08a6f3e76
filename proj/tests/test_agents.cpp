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

#include <random>

#include "slotlab/agents.hpp"

using namespace slotlab;
using agents::Decision;
using agents::DecisionKind;
using game::BetRange;
using game::BettingStyle;

namespace {

constexpr BetRange kVariableRange{5.0, 100.0};
constexpr BetRange kFixedRange{10.0, 10.0};
constexpr auto kVariable = BettingStyle::Kind::Variable;
constexpr auto kFixed = BettingStyle::Kind::Fixed;

agents::StateView view_of(double balance, int losses = 0, int wins = 0) {
  agents::StateView v;
  v.balance = balance;
  v.consecutive_losses = losses;
  v.consecutive_wins = wins;
  return v;
}

}  // namespace

TEST_CASE("parse_decision extracts the final keyword and stake") {
  auto d = agents::parse_decision("I will make a strategic choice to bet $20",
                                  kVariableRange, kVariable);
  REQUIRE(d.has_value());
  CHECK(d->kind == DecisionKind::Bet);
  CHECK(d->amount == 20.0);
  CHECK(d->raw_response == "I will make a strategic choice to bet $20");

  d = agents::parse_decision("Quit", kVariableRange, kVariable);
  REQUIRE(d.has_value());
  CHECK(d->kind == DecisionKind::Quit);

  CHECK_FALSE(agents::parse_decision("let's go", kVariableRange, kVariable)
                  .has_value());
  CHECK_FALSE(agents::parse_decision("", kVariableRange, kVariable).has_value());
}

TEST_CASE("the last keyword wins in chain-of-thought replies") {
  const char* musings =
      "I could quit now and keep my money. But the payout is tempting."
      " Decision: Bet $15";
  auto d = agents::parse_decision(musings, kVariableRange, kVariable);
  REQUIRE(d.has_value());
  CHECK(d->kind == DecisionKind::Bet);
  CHECK(d->amount == 15.0);

  const char* reconsidered =
      "I should bet $50 to chase the loss... on reflection, I Quit.";
  d = agents::parse_decision(reconsidered, kVariableRange, kVariable);
  REQUIRE(d.has_value());
  CHECK(d->kind == DecisionKind::Quit);
}

TEST_CASE("keyword matching is word-bounded and case-insensitive") {
  // "better" and "betting" do not contain a standalone "bet".
  CHECK_FALSE(agents::parse_decision("betting is better than quitting",
                                     kVariableRange, kVariable)
                  .has_value());
  auto d = agents::parse_decision("BET 25", kVariableRange, kVariable);
  REQUIRE(d.has_value());
  CHECK(d->amount == 25.0);
  d = agents::parse_decision("I QUIT!", kVariableRange, kVariable);
  REQUIRE(d.has_value());
  CHECK(d->kind == DecisionKind::Quit);
}

TEST_CASE("variable bets take the last number after the keyword") {
  auto d = agents::parse_decision("bet $10, no wait, make it 35",
                                  kVariableRange, kVariable);
  REQUIRE(d.has_value());
  CHECK(d->amount == 35.0);

  // Numbers before the keyword do not count.
  CHECK_FALSE(agents::parse_decision("my balance is 80 so I will bet",
                                     kVariableRange, kVariable)
                  .has_value());

  // Thousands separators and decimals parse.
  d = agents::parse_decision("bet $1,000", kVariableRange, kVariable);
  REQUIRE(d.has_value());
  CHECK(d->amount == 100.0);  // clamped to the range maximum
  d = agents::parse_decision("bet 12.5 dollars", kVariableRange, kVariable);
  REQUIRE(d.has_value());
  CHECK(d->amount == 12.5);
}

TEST_CASE("amounts clamp into the legal range") {
  auto d = agents::parse_decision("bet $2", kVariableRange, kVariable);
  REQUIRE(d.has_value());
  CHECK(d->amount == 5.0);
  d = agents::parse_decision("bet $400", kVariableRange, kVariable);
  REQUIRE(d.has_value());
  CHECK(d->amount == 100.0);
}

TEST_CASE("fixed style coerces any stated amount to the stake") {
  auto d = agents::parse_decision("bet $55", kFixedRange, kFixed);
  REQUIRE(d.has_value());
  CHECK(d->amount == 10.0);
  // No amount needed under fixed betting.
  d = agents::parse_decision("I bet", kFixedRange, kFixed);
  REQUIRE(d.has_value());
  CHECK(d->amount == 10.0);
  // But a variable bet without an amount is a parse failure.
  CHECK_FALSE(agents::parse_decision("I bet", kVariableRange, kVariable)
                  .has_value());
}

TEST_CASE("fuzzed text never produces an out-of-range bet") {
  std::mt19937 gen(2468);
  std::uniform_int_distribution<int> len(0, 60);
  std::uniform_int_distribution<int> chr(32, 126);
  std::uniform_int_distribution<int> insert(0, 3);
  const char* words[] = {" bet ", " quit ", " $", "bet$"};
  for (int iter = 0; iter < 5000; ++iter) {
    std::string text;
    for (int i = len(gen); i-- > 0;) text.push_back(static_cast<char>(chr(gen)));
    if (insert(gen) == 0) text += words[iter % 4];
    for (int i = len(gen) / 2; i-- > 0;) {
      text.push_back(static_cast<char>(chr(gen)));
    }
    const auto d = agents::parse_decision(text, kVariableRange, kVariable);
    if (d.has_value() && d->kind == DecisionKind::Bet) {
      CHECK(d->amount >= kVariableRange.min);
      CHECK(d->amount <= kVariableRange.max);
    }
  }
}

TEST_CASE("render-then-parse round trip") {
  for (const double amount : {5.0, 12.5, 40.0, 100.0}) {
    const std::string text = "Bet $" + std::to_string(amount);
    const auto d = agents::parse_decision(text, kVariableRange, kVariable);
    REQUIRE(d.has_value());
    CHECK(d->kind == DecisionKind::Bet);
    CHECK(d->amount == doctest::Approx(amount));
  }
  const auto q = agents::parse_decision("Quit", kVariableRange, kVariable);
  REQUIRE(q.has_value());
  CHECK(q->kind == DecisionKind::Quit);
}

TEST_CASE("synthetic policy: base fraction and chase multipliers") {
  agents::SyntheticParams params;
  params.base_fraction = 0.1;

  rng::Stream rng(1);
  auto d = agents::synthetic_policy(params, view_of(100.0), kVariableRange, rng);
  CHECK(d.kind == DecisionKind::Bet);
  CHECK(d.amount == 10.0);

  // Two-loss streak at multiplier 2: 10 * 2^2 = 40.
  params.loss_chase_mult = 2.0;
  d = agents::synthetic_policy(params, view_of(100.0, 2), kVariableRange, rng);
  CHECK(d.amount == 40.0);

  // Loss-chase example from the per-op contract: previous bet $10, one loss,
  // multiplier 1.5 -> $15.
  agents::SyntheticParams chase;
  chase.base_fraction = 0.1;
  chase.loss_chase_mult = 1.5;
  d = agents::synthetic_policy(chase, view_of(100.0, 1), kVariableRange, rng);
  CHECK(d.amount == 15.0);

  // Win chasing works the same way on win streaks.
  agents::SyntheticParams winchase;
  winchase.base_fraction = 0.1;
  winchase.win_chase_mult = 2.0;
  d = agents::synthetic_policy(winchase, view_of(100.0, 0, 1), kVariableRange,
                               rng);
  CHECK(d.amount == 20.0);
}

TEST_CASE("synthetic policy: target balance and hazard quits") {
  agents::SyntheticParams params;
  params.target_balance = 200.0;
  rng::Stream rng(3);
  auto d = agents::synthetic_policy(params, view_of(210.0), kVariableRange, rng);
  CHECK(d.kind == DecisionKind::Quit);
  d = agents::synthetic_policy(params, view_of(190.0), kVariableRange, rng);
  CHECK(d.kind == DecisionKind::Bet);

  agents::SyntheticParams certain_quit;
  certain_quit.quit_hazard = 1.0;
  d = agents::synthetic_policy(certain_quit, view_of(100.0), kVariableRange, rng);
  CHECK(d.kind == DecisionKind::Quit);
}

TEST_CASE("synthetic policy: all-in parameterization") {
  agents::SyntheticParams all_in;
  all_in.base_fraction = 1.0;
  rng::Stream rng(4);
  const BetRange allin_range{5.0, 260.0};
  const auto d =
      agents::synthetic_policy(all_in, view_of(260.0), allin_range, rng);
  CHECK(d.kind == DecisionKind::Bet);
  CHECK(d.amount == 260.0);
}

TEST_CASE("synthetic policy: extreme override wagers at least half") {
  agents::SyntheticParams params;
  params.base_fraction = 0.05;
  params.extreme_prob = 1.0;
  rng::Stream rng(5);
  const auto d =
      agents::synthetic_policy(params, view_of(90.0), kVariableRange, rng);
  CHECK(d.kind == DecisionKind::Bet);
  CHECK(d.amount >= 45.0);
  CHECK(d.amount <= 100.0);
}

TEST_CASE("synthetic policy is deterministic per seed") {
  agents::SyntheticParams params;
  params.base_fraction = 0.2;
  params.quit_hazard = 0.3;
  params.extreme_prob = 0.2;
  for (int round = 0; round < 20; ++round) {
    rng::Stream a(round), b(round);
    const auto da =
        agents::synthetic_policy(params, view_of(80.0, 1), kVariableRange, a);
    const auto db =
        agents::synthetic_policy(params, view_of(80.0, 1), kVariableRange, b);
    CHECK(da.kind == db.kind);
    CHECK(da.amount == db.amount);
  }
}

TEST_CASE("synthetic params validate their ranges") {
  agents::SyntheticParams params;
  params.base_fraction = 0.0;
  CHECK_THROWS_AS(params.validate(), Error);
  params = {};
  params.loss_chase_mult = 0.5;
  CHECK_THROWS_AS(params.validate(), Error);
  params = {};
  params.extreme_prob = 1.5;
  CHECK_THROWS_AS(params.validate(), Error);
}

TEST_CASE("scripted agents replay their sequence then stop") {
  agents::AgentSpec spec;
  spec.kind = agents::AgentSpec::Kind::Scripted;
  Decision bet;
  bet.kind = DecisionKind::Bet;
  bet.amount = 10.0;
  Decision quit;
  quit.kind = DecisionKind::Quit;
  spec.scripted.sequence = {bet, quit};

  auto agent = agents::make_agent(spec, kVariable, 7);
  auto d = agent->decide("", kVariableRange, view_of(100.0));
  CHECK(d.kind == DecisionKind::Bet);
  CHECK(d.amount == 10.0);
  d = agent->decide("", kVariableRange, view_of(90.0));
  CHECK(d.kind == DecisionKind::Quit);
  // Script exhausted: conservative stop, never an invented bet.
  d = agent->decide("", kVariableRange, view_of(90.0));
  CHECK(d.kind == DecisionKind::Quit);

  agents::AgentSpec empty;
  empty.kind = agents::AgentSpec::Kind::Scripted;
  CHECK_THROWS_AS(agents::make_agent(empty, kVariable, 7), Error);
}

TEST_CASE("scripted bets clamp to the live range") {
  agents::AgentSpec spec;
  spec.kind = agents::AgentSpec::Kind::Scripted;
  Decision big;
  big.kind = DecisionKind::Bet;
  big.amount = 500.0;
  spec.scripted.sequence = {big};
  auto agent = agents::make_agent(spec, kVariable, 7);
  const auto d = agent->decide("", kVariableRange, view_of(100.0));
  CHECK(d.amount == 100.0);
}

TEST_CASE("random agents stay in range and are seed-stable") {
  agents::AgentSpec spec;
  spec.kind = agents::AgentSpec::Kind::Random;
  spec.random.seed = 11;
  spec.random.quit_prob = 0.25;

  auto a = agents::make_agent(spec, kVariable, 42);
  auto b = agents::make_agent(spec, kVariable, 42);
  int quits = 0;
  for (int i = 0; i < 500; ++i) {
    const auto da = a->decide("", kVariableRange, view_of(100.0));
    const auto db = b->decide("", kVariableRange, view_of(100.0));
    CHECK(da.kind == db.kind);
    if (da.kind == DecisionKind::Bet) {
      CHECK(da.amount == db.amount);
      CHECK(da.amount >= kVariableRange.min);
      CHECK(da.amount <= kVariableRange.max);
    } else {
      ++quits;
    }
  }
  CHECK(quits > 50);   // hazard is plausibly near 25%
  CHECK(quits < 250);
}
