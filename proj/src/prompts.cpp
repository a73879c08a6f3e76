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

#include "slotlab/prompts.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace slotlab::prompts {

namespace {

void replace_all(std::string& text, std::string_view needle,
                 std::string_view replacement) {
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    text.replace(pos, needle.size(), replacement);
    pos += replacement.size();
  }
}

const char* style_suffix(game::BettingStyle::Kind kind) {
  return kind == game::BettingStyle::Kind::Fixed ? "fixed" : "variable";
}

}  // namespace

std::string ConditionCode::canonical() const {
  return composition() + "-" + style_suffix(style);
}

ConditionCode parse_condition_code(std::string_view text) {
  require(!text.empty(), Status::InvalidArgument, "empty condition code");

  std::string body(text);
  ConditionCode code;
  code.style = game::BettingStyle::Kind::Variable;
  if (auto dash = body.find('-'); dash != std::string::npos) {
    std::string suffix = body.substr(dash + 1);
    std::transform(suffix.begin(), suffix.end(), suffix.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (suffix == "fixed") {
      code.style = game::BettingStyle::Kind::Fixed;
    } else if (suffix == "variable") {
      code.style = game::BettingStyle::Kind::Variable;
    } else {
      raise(Status::InvalidArgument, "unknown betting-style suffix: " + suffix);
    }
    body.erase(dash);
  }

  std::string upper = body;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (upper == "BASE") return code;

  bool seen[5] = {};
  for (char c : upper) {
    const auto idx = kCanonicalOrder.find(c);
    require(idx != std::string_view::npos, Status::InvalidArgument,
            std::string("unknown component letter: ") + c);
    require(!seen[idx], Status::InvalidArgument,
            std::string("duplicate component letter: ") + c);
    seen[idx] = true;
  }
  for (std::size_t i = 0; i < kCanonicalOrder.size(); ++i) {
    if (seen[i]) code.components.push_back(kCanonicalOrder[i]);
  }
  return code;
}

std::vector<std::string> all_compositions() {
  std::vector<std::string> out;
  out.reserve(32);
  for (int count = 0; count <= 5; ++count) {
    for (unsigned mask = 0; mask < 32; ++mask) {
      if (std::popcount(mask) != count) continue;
      std::string letters;
      for (std::size_t i = 0; i < kCanonicalOrder.size(); ++i) {
        if (mask & (1u << i)) letters.push_back(kCanonicalOrder[i]);
      }
      out.push_back(letters.empty() ? "BASE" : letters);
    }
  }
  return out;
}

std::string format_currency(double amount) {
  char buf[64];
  const double rounded = std::round(amount);
  if (std::abs(amount - rounded) < 1e-9) {
    std::snprintf(buf, sizeof(buf), "%.0f", rounded);
  } else {
    std::snprintf(buf, sizeof(buf), "%.2f", amount);
  }
  return std::string("$") + buf;
}

std::string render_history(std::span<const game::RoundRecord> history) {
  if (history.empty()) return "No previous rounds.";
  std::string out;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto& r = history[i];
    if (i > 0) out += '\n';
    out += "Round " + std::to_string(r.round_index) + ": Bet " +
           format_currency(r.bet) + " -> ";
    if (r.outcome == game::Outcome::Win) {
      out += "Win (+" + format_currency(r.payout - r.bet) + ")";
    } else {
      out += "Loss (-" + format_currency(r.bet) + ")";
    }
  }
  return out;
}

std::string compose(const PromptSpec& spec, const game::GameConfig& config,
                    const TemplateSet& templates) {
  // Components joined by single newlines, then a blank line before the base.
  std::string prefix;
  for (char letter : templates.component_order) {
    if (!spec.condition.has(letter)) continue;
    if (!prefix.empty()) prefix += '\n';
    prefix += templates.component_text(letter);
  }
  if (!prefix.empty()) prefix += "\n\n";

  std::span<const game::RoundRecord> window(spec.history);
  const auto cap = static_cast<std::size_t>(std::max(config.history_window, 0));
  if (window.size() > cap) window = window.subspan(window.size() - cap);

  std::string body(templates.base);
  replace_all(body, "${balance}", format_currency(spec.balance));
  replace_all(body, "{history}", render_history(window));
  if (spec.consecutive_losses >= config.warning_threshold) {
    std::string warning(templates.warning);
    replace_all(warning, "{consecutive_losses}",
                std::to_string(spec.consecutive_losses));
    replace_all(body, "{warning_message}", warning);
  } else {
    // Drop the placeholder line and the blank line that follows it.
    replace_all(body, "{warning_message}\n\n", "");
    replace_all(body, "{warning_message}", "");
  }
  return prefix + body;
}

}  // namespace slotlab::prompts
