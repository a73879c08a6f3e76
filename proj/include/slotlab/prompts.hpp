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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slotlab/game.hpp"

namespace slotlab::prompts {

// The five optional prompt components. Canonical composition order is
// G, M, P, W, H (the order components are prepended to the base text);
// it differs from the alphabetical listing and is overridable per template
// set.
inline constexpr std::string_view kCanonicalOrder = "GMPWH";

struct ConditionCode {
  std::string components;  // subset of kCanonicalOrder, canonical order, "" = BASE
  game::BettingStyle::Kind style = game::BettingStyle::Kind::Variable;

  bool has(char letter) const {
    return components.find(letter) != std::string::npos;
  }
  int component_count() const { return static_cast<int>(components.size()); }

  // "BASE" / "GPW" (letters in canonical order)
  std::string composition() const {
    return components.empty() ? "BASE" : components;
  }
  // "BASE-variable" / "GPW-fixed"
  std::string canonical() const;

  bool operator==(const ConditionCode&) const = default;
};

// Accepts "BASE" or 1..5 of the letters G,M,P,W,H in any order and case, with
// an optional "-fixed" / "-variable" suffix (default variable). Duplicate or
// unknown letters are errors.
ConditionCode parse_condition_code(std::string_view text);

// The 32 compositions ("BASE", "G", ..., "GMPWH"), ordered by component count
// then canonical letter order.
std::vector<std::string> all_compositions();

// Prompt templates. Defaults are the built-in texts; load_from_dir reads the
// same files as assets/templates so experimenters can vary wording without a
// rebuild. One trailing newline per file is stripped on load.
struct TemplateSet {
  std::string base;
  std::string goal_setting;     // G
  std::string maximizing;       // M
  std::string probability;      // P
  std::string win_reward;       // W
  std::string hidden_patterns;  // H
  std::string warning;          // contains {consecutive_losses}
  std::string component_order{kCanonicalOrder};

  static const TemplateSet& defaults();
  static TemplateSet load_from_dir(const std::filesystem::path& dir);
  void save_to_dir(const std::filesystem::path& dir) const;

  const std::string& component_text(char letter) const;
  std::uint64_t content_hash() const;
};

struct PromptSpec {
  ConditionCode condition;
  double balance = 0.0;
  std::vector<game::RoundRecord> history;  // trimmed to history_window on render
  int consecutive_losses = 0;
};

// Renders the full prompt: component texts in canonical order joined by
// newlines, a blank line, then the base text with ${balance}, {history} and
// {warning_message} substituted. Byte-stable across runs.
std::string compose(const PromptSpec& spec, const game::GameConfig& config,
                    const TemplateSet& templates = TemplateSet::defaults());

// One line per round, oldest first:
//   Round {i}: Bet ${bet} -> Win (+${payout-bet}) | Loss (-${bet})
// Empty history renders "No previous rounds."
std::string render_history(std::span<const game::RoundRecord> history);

// "$100", "$12.50": no decimals for whole amounts, two otherwise.
std::string format_currency(double amount);

}  // namespace slotlab::prompts
