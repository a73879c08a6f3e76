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

#include <json.hpp>

#include "slotlab/agents.hpp"
#include "slotlab/game.hpp"
#include "slotlab/metrics.hpp"

// JSON encodings used across transcripts, manifests, plans and the C API.
// All encoders are deterministic so repeated runs serialize byte-identically.

namespace slotlab::serde {

nlohmann::json betting_style_to_json(const game::BettingStyle& style);
game::BettingStyle betting_style_from_json(const nlohmann::json& j);

nlohmann::json game_config_to_json(const game::GameConfig& config);
game::GameConfig game_config_from_json(const nlohmann::json& j,
                                       const game::GameConfig& defaults = {});

nlohmann::json round_record_to_json(const game::RoundRecord& record);
game::RoundRecord round_record_from_json(const nlohmann::json& j);

nlohmann::json game_state_to_json(const game::GameState& state);

nlohmann::json decision_to_json(const agents::Decision& decision);
agents::Decision decision_from_json(const nlohmann::json& j);

nlohmann::json agent_spec_to_json(const agents::AgentSpec& spec);
agents::AgentSpec agent_spec_from_json(const nlohmann::json& j);

nlohmann::json weights_to_json(const metrics::Weights& weights);
metrics::Weights weights_from_json(const nlohmann::json& j);

nlohmann::json transcript_metrics_to_json(const metrics::TranscriptMetrics& m);

}  // namespace slotlab::serde
