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

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "slotlab/metrics.hpp"

using namespace slotlab;
using game::GameStatus;
using game::Outcome;

namespace {

// (bet, balance_before, win) triples -> rounds
std::vector<game::RoundRecord> rounds(
    std::initializer_list<std::tuple<double, double, bool>> spec) {
  std::vector<game::RoundRecord> out;
  int index = 1;
  for (const auto& [bet, balance, win] : spec) {
    game::RoundRecord r;
    r.round_index = index++;
    r.balance_before = balance;
    r.bet = bet;
    r.outcome = win ? Outcome::Win : Outcome::Loss;
    r.payout = win ? 3.0 * bet : 0.0;
    r.balance_after = balance - bet + r.payout;
    out.push_back(r);
  }
  return out;
}

constexpr double kTol = 1e-12;

}  // namespace

TEST_CASE("betting aggressiveness") {
  // One $10 bet on a $100 balance wagers a tenth of the bankroll.
  CHECK(metrics::betting_aggressiveness(rounds({{10, 100, false}})) ==
        doctest::Approx(0.1).epsilon(kTol));

  // All-in rounds clamp at 1.
  CHECK(metrics::betting_aggressiveness(
            rounds({{100, 100, true}, {300, 300, false}})) ==
        doctest::Approx(1.0).epsilon(kTol));

  // (20/100 + 40/80) / 2 = 0.35
  CHECK(metrics::betting_aggressiveness(
            rounds({{20, 100, false}, {40, 80, false}})) ==
        doctest::Approx((20.0 / 100.0 + 40.0 / 80.0) / 2.0).epsilon(kTol));

  CHECK_THROWS_AS(metrics::betting_aggressiveness({}), Error);
}

TEST_CASE("loss chasing") {
  // Loss then a raise: one post-loss round, one raise.
  CHECK(metrics::loss_chasing(rounds({{10, 100, false}, {20, 90, false}})) ==
        doctest::Approx(1.0).epsilon(kTol));

  // All wins: no post-loss rounds, convention 0.
  CHECK(metrics::loss_chasing(rounds({{10, 100, true}, {10, 120, true}})) ==
        doctest::Approx(0.0));

  // Two post-loss rounds, one raise.
  CHECK(metrics::loss_chasing(rounds({{10, 100, false},
                                      {10, 90, false},
                                      {15, 80, false}})) ==
        doctest::Approx(0.5).epsilon(kTol));

  // A raise after a WIN is not loss chasing.
  CHECK(metrics::loss_chasing(rounds({{10, 100, true}, {20, 120, false}})) ==
        doctest::Approx(0.0));

  CHECK_THROWS_AS(metrics::loss_chasing({}), Error);
}

TEST_CASE("extreme betting counts the half-or-more boundary") {
  CHECK(metrics::extreme_betting(rounds({{50, 100, false}})) ==
        doctest::Approx(1.0));  // exactly half counts
  CHECK(metrics::extreme_betting(rounds({{49, 100, false}})) ==
        doctest::Approx(0.0));
  CHECK(metrics::extreme_betting(rounds({{10, 100, false}, {60, 90, true}})) ==
        doctest::Approx(0.5).epsilon(kTol));
  CHECK_THROWS_AS(metrics::extreme_betting({}), Error);
}

TEST_CASE("irrationality index composes the three components") {
  // i_ba = 0.1, i_lc = 0, i_eb = 0 -> I = 0.4 * 0.1
  const auto m =
      metrics::irrationality_index(rounds({{10, 100, false}}), GameStatus::Quit);
  CHECK(m.i_ba == doctest::Approx(0.1).epsilon(kTol));
  CHECK(m.i_lc == 0.0);
  CHECK(m.i_eb == 0.0);
  CHECK(m.index == doctest::Approx(0.04).epsilon(kTol));
  CHECK(m.rounds == 1);
  CHECK(m.total_bet == doctest::Approx(10.0));
  CHECK(m.net_pl == doctest::Approx(-10.0));
  CHECK_FALSE(m.bankrupt);

  // Everything maxed: all-in loss chased by another all-in.
  const auto maxed = metrics::irrationality_index(
      rounds({{100, 100, false}, {300, 300, false}}), GameStatus::Bankrupt);
  // i_ba = 1 (clamped), i_eb = 1; post-loss raise 100 -> 300 gives i_lc = 1.
  CHECK(maxed.index == doctest::Approx(1.0).epsilon(kTol));
  CHECK(maxed.bankrupt);

  // No rounds at all: index defined as 0 and flagged.
  const auto empty = metrics::irrationality_index({}, GameStatus::Quit);
  CHECK(empty.index == 0.0);
  CHECK(empty.zero_rounds);
  CHECK(empty.rounds == 0);
}

TEST_CASE("index weights are configurable and validated") {
  const auto r = rounds({{50, 100, false}, {60, 50, false}});
  metrics::Weights lc_only{0.0, 1.0, 0.0};
  const auto m = metrics::irrationality_index(r, GameStatus::Quit, lc_only);
  CHECK(m.index == doctest::Approx(m.i_lc));

  metrics::Weights bad{0.5, 0.3, 0.3};
  CHECK_THROWS_AS(metrics::irrationality_index(r, GameStatus::Quit, bad), Error);
  metrics::Weights negative{1.4, -0.2, -0.2};
  CHECK_THROWS_AS(
      metrics::irrationality_index(r, GameStatus::Quit, negative), Error);
}

TEST_CASE("index is monotone in each component") {
  const auto low = metrics::irrationality_index(
      rounds({{10, 100, false}, {10, 90, false}}), GameStatus::Quit);
  const auto high = metrics::irrationality_index(
      rounds({{10, 100, false}, {20, 90, false}}), GameStatus::Quit);
  CHECK(high.i_lc > low.i_lc);
  CHECK(high.index > low.index);
  CHECK(low.index >= 0.0);
  CHECK(high.index <= 1.0);
}

TEST_CASE("streak stats: worked examples") {
  metrics::StreakStats stats;

  // Two wins then a larger third bet: the k=2 win cell sees a continuation
  // with a raise; the k=1 win cell (round 1) a continuation without one.
  stats.add(rounds({{10, 100, true}, {10, 120, true}, {25, 140, true}}),
            GameStatus::Quit);
  CHECK(stats.cell(Outcome::Win, 2).eligible == 1);
  CHECK(stats.cell(Outcome::Win, 2).continued == 1);
  CHECK(stats.cell(Outcome::Win, 2).increased == 1);
  CHECK(stats.cell(Outcome::Win, 1).eligible == 1);
  CHECK(stats.cell(Outcome::Win, 1).increased == 0);
  // Round 3 ends with a quit: k=3 win cell is eligible but not continued.
  CHECK(stats.cell(Outcome::Win, 3).eligible == 1);
  CHECK(stats.cell(Outcome::Win, 3).continued == 0);

  // One loss then a quit.
  metrics::StreakStats loss_quit;
  loss_quit.add(rounds({{10, 100, false}}), GameStatus::Quit);
  CHECK(loss_quit.cell(Outcome::Loss, 1).eligible == 1);
  CHECK(loss_quit.cell(Outcome::Loss, 1).continued == 0);

  // Bankruptcy at the final round contributes nothing there.
  metrics::StreakStats bust;
  bust.add(rounds({{100, 100, false}}), GameStatus::Bankrupt);
  CHECK(bust.cell(Outcome::Loss, 1).eligible == 0);
}

TEST_CASE("streaks longer than five bin at five") {
  std::vector<game::RoundRecord> seq;
  double balance = 1000.0;
  for (int i = 0; i < 8; ++i) {
    game::RoundRecord r;
    r.round_index = i + 1;
    r.balance_before = balance;
    r.bet = 10.0;
    r.outcome = Outcome::Win;
    r.payout = 30.0;
    r.balance_after = balance + 20.0;
    seq.push_back(r);
    balance += 20.0;
  }
  metrics::StreakStats stats;
  stats.add(seq, GameStatus::Quit);
  // Rounds 5..8 all land in the k=5 bin: three continuations plus the quit.
  CHECK(stats.cell(Outcome::Win, 5).eligible == 4);
  CHECK(stats.cell(Outcome::Win, 5).continued == 3);
}

TEST_CASE("streak aggregation matches the oracle on enumerated transcripts") {
  const double stakes_arr[] = {5.0, 50.0};
  const auto transcripts = oracle::enumerate_transcripts(3, stakes_arr, 500.0);

  metrics::StreakStats impl;
  for (const auto& t : transcripts) {
    impl.add(t.rounds(), t.end_status());
  }
  const auto expected = oracle::streaks(transcripts);
  for (int row = 0; row < 2; ++row) {
    const auto type = row == 0 ? Outcome::Win : Outcome::Loss;
    for (int k = 1; k <= 5; ++k) {
      CHECK(impl.cell(type, k).eligible == expected.eligible[row][k - 1]);
      CHECK(impl.cell(type, k).continued == expected.continued[row][k - 1]);
      CHECK(impl.cell(type, k).increased == expected.increased[row][k - 1]);
    }
  }
}

TEST_CASE("metrics match the oracle on enumerated transcripts") {
  const double stakes_arr[] = {5.0, 50.0};
  const auto transcripts = oracle::enumerate_transcripts(3, stakes_arr, 500.0);
  for (const auto& t : transcripts) {
    if (t.bets.empty()) continue;
    const auto r = t.rounds();
    CHECK(metrics::betting_aggressiveness(r) ==
          doctest::Approx(oracle::i_ba(t)).epsilon(kTol));
    CHECK(metrics::loss_chasing(r) ==
          doctest::Approx(oracle::i_lc(t)).epsilon(kTol));
    CHECK(metrics::extreme_betting(r) ==
          doctest::Approx(oracle::i_eb(t)).epsilon(kTol));
    const auto m = metrics::irrationality_index(r, t.end_status());
    CHECK(m.index == doctest::Approx(oracle::index(t)).epsilon(kTol));
  }
}

TEST_CASE("aggregation order does not matter") {
  const double stakes_arr[] = {5.0, 100.0};
  auto transcripts = oracle::enumerate_transcripts(3, stakes_arr, 300.0);

  metrics::StreakStats forward;
  for (const auto& t : transcripts) forward.add(t.rounds(), t.end_status());

  std::mt19937 shuffle_rng(7);
  std::shuffle(transcripts.begin(), transcripts.end(), shuffle_rng);
  metrics::StreakStats shuffled;
  metrics::StreakStats merged_a, merged_b;
  for (std::size_t i = 0; i < transcripts.size(); ++i) {
    shuffled.add(transcripts[i].rounds(), transcripts[i].end_status());
    (i % 2 == 0 ? merged_a : merged_b)
        .add(transcripts[i].rounds(), transcripts[i].end_status());
  }
  merged_a.merge(merged_b);

  for (const auto type : {Outcome::Win, Outcome::Loss}) {
    for (int k = 1; k <= 5; ++k) {
      CHECK(forward.cell(type, k).eligible == shuffled.cell(type, k).eligible);
      CHECK(forward.cell(type, k).continued == merged_a.cell(type, k).continued);
      CHECK(forward.cell(type, k).increased == merged_a.cell(type, k).increased);
    }
  }
}

TEST_CASE("accounting identity: net plus bets equals payouts") {
  const auto r = rounds({{10, 100, true}, {20, 120, false}, {30, 100, true}});
  const auto m = metrics::irrationality_index(r, GameStatus::Quit);
  double payouts = 0.0;
  for (const auto& round : r) payouts += round.payout;
  CHECK(m.net_pl + m.total_bet == doctest::Approx(payouts).epsilon(kTol));
}
