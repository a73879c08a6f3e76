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

#include "slotlab.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "slotlab/features.hpp"
#include "slotlab/runner.hpp"
#include "slotlab/serde.hpp"
#include "slotlab/version.hpp"

using nlohmann::json;
namespace sl = slotlab;

namespace {

thread_local std::string t_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

slotlab_status set_error(slotlab_status code, const std::string& message) {
  t_last_error = message;
  return code;
}

// Translates any in-flight exception into a status code + thread-local
// message. Every API entry point funnels through here.
slotlab_status handle_exception() {
  try {
    throw;
  } catch (const sl::Error& e) {
    return set_error(static_cast<slotlab_status>(static_cast<int>(e.code())),
                     e.what());
  } catch (const json::exception& e) {
    return set_error(SLOTLAB_ERR_FORMAT, std::string("bad JSON: ") + e.what());
  } catch (const std::exception& e) {
    return set_error(SLOTLAB_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(SLOTLAB_ERR_INTERNAL, "unknown error");
  }
}

template <typename Fn>
slotlab_status guarded(Fn&& fn) {
  try {
    fn();
    return SLOTLAB_OK;
  } catch (...) {
    return handle_exception();
  }
}

slotlab_status require_arg(bool ok, const char* what) {
  if (ok) return SLOTLAB_OK;
  return set_error(SLOTLAB_ERR_INVALID_ARGUMENT,
                   std::string("null argument: ") + what);
}

slotlab_status emit(char** out, const std::string& text) {
  *out = dup_string(text);
  if (*out == nullptr) {
    return set_error(SLOTLAB_ERR_INTERNAL, "out of memory");
  }
  return SLOTLAB_OK;
}

}  // namespace

struct slotlab_game {
  sl::game::GameConfig config;
  sl::game::GameState state;
  std::uint64_t seed = 0;
  sl::rng::Stream draws;

  slotlab_game(const sl::game::GameConfig& cfg, std::uint64_t s)
      : config(cfg), state(sl::game::new_game(cfg, s)), seed(s), draws(s) {}
};

struct slotlab_dataset {
  sl::features::ActivationDataset data;
};

extern "C" {

const char* slotlab_version(void) { return sl::kVersion; }

const char* slotlab_last_error(void) { return t_last_error.c_str(); }

void slotlab_string_free(char* s) { std::free(s); }

slotlab_status slotlab_compose(const char* request_json, char** out_prompt) {
  if (auto rc = require_arg(request_json && out_prompt, "request/out");
      rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    const json request = json::parse(request_json);
    sl::prompts::PromptSpec spec;
    spec.condition = sl::prompts::parse_condition_code(
        request.value("condition", "BASE"));
    spec.balance = request.value("balance", 100.0);
    spec.consecutive_losses = request.value("consecutive_losses", 0);
    if (request.contains("history")) {
      for (const auto& rj : request["history"]) {
        spec.history.push_back(sl::serde::round_record_from_json(rj));
      }
    }
    sl::game::GameConfig config;
    if (request.contains("game")) {
      config = sl::serde::game_config_from_json(request["game"]);
    }
    std::string prompt;
    if (request.contains("template_dir")) {
      const auto templates = sl::prompts::TemplateSet::load_from_dir(
          request["template_dir"].get<std::string>());
      prompt = sl::prompts::compose(spec, config, templates);
    } else {
      prompt = sl::prompts::compose(spec, config);
    }
    const auto rc = emit(out_prompt, prompt);
    if (rc != SLOTLAB_OK) sl::raise(sl::Status::Internal, "out of memory");
  });
}

slotlab_status slotlab_game_new(const char* config_json, uint64_t seed,
                                slotlab_game** out_game) {
  if (auto rc = require_arg(out_game != nullptr, "out_game"); rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    sl::game::GameConfig config;
    if (config_json != nullptr && config_json[0] != '\0') {
      config = sl::serde::game_config_from_json(json::parse(config_json));
    }
    config.validate();
    *out_game = new slotlab_game(config, seed);
  });
}

void slotlab_game_free(slotlab_game* game) { delete game; }

slotlab_status slotlab_game_state(const slotlab_game* game, char** out_json) {
  if (auto rc = require_arg(game && out_json, "game/out"); rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    const auto rc = emit(out_json, sl::serde::game_state_to_json(game->state).dump());
    if (rc != SLOTLAB_OK) sl::raise(sl::Status::Internal, "out of memory");
  });
}

slotlab_status slotlab_game_legal_range(const slotlab_game* game,
                                        int* out_has_range, double* out_min,
                                        double* out_max) {
  if (auto rc = require_arg(game && out_has_range && out_min && out_max,
                            "game/out");
      rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    const auto range = sl::game::legal_bet_range(game->state, game->config);
    *out_has_range = range.has_value() ? 1 : 0;
    *out_min = range ? range->min : 0.0;
    *out_max = range ? range->max : 0.0;
  });
}

slotlab_status slotlab_game_bet(slotlab_game* game, double amount) {
  if (auto rc = require_arg(game != nullptr, "game"); rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    game->state = sl::game::resolve_bet(game->state, amount, game->config,
                                        game->draws.next_unit());
  });
}

slotlab_status slotlab_game_quit(slotlab_game* game) {
  if (auto rc = require_arg(game != nullptr, "game"); rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] { game->state = sl::game::apply_quit(game->state); });
}

slotlab_status slotlab_game_metrics(const slotlab_game* game, char** out_json) {
  if (auto rc = require_arg(game && out_json, "game/out"); rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    const auto m = sl::metrics::irrationality_index(game->state.history,
                                                    game->state.status);
    const auto rc = emit(out_json, sl::serde::transcript_metrics_to_json(m).dump());
    if (rc != SLOTLAB_OK) sl::raise(sl::Status::Internal, "out of memory");
  });
}

slotlab_status slotlab_game_prompt(const slotlab_game* game,
                                   const char* condition, char** out_prompt) {
  if (auto rc = require_arg(game && condition && out_prompt, "game/condition");
      rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    sl::prompts::PromptSpec spec;
    spec.condition = sl::prompts::parse_condition_code(condition);
    spec.balance = game->state.balance;
    spec.history = game->state.history;
    spec.consecutive_losses = game->state.consecutive_losses;
    const auto rc =
        emit(out_prompt, sl::prompts::compose(spec, game->config));
    if (rc != SLOTLAB_OK) sl::raise(sl::Status::Internal, "out of memory");
  });
}

}  // extern "C"

namespace {

sl::runner::ExperimentPlan plan_from_json_text(const char* plan_json) {
  const json j = json::parse(plan_json);
  sl::runner::ExperimentPlan plan;
  plan.agent = sl::serde::agent_spec_from_json(j.at("agent"));

  const std::string style = j.value("style", "both");
  std::vector<std::string> entries;
  if (!j.contains("conditions") || j["conditions"].is_string()) {
    entries.push_back(j.value("conditions", "all"));
  } else {
    for (const auto& c : j["conditions"]) entries.push_back(c.get<std::string>());
  }
  plan.conditions = sl::runner::expand_condition_args(entries, style);

  plan.replications = j.value("replications", 50);
  plan.master_seed = j.value("master_seed", std::uint64_t{0});
  plan.output_dir = j.at("output_dir").get<std::string>();
  plan.parallel_limit = j.value("parallel_limit", 1);
  plan.llm_parallel_limit = j.value("llm_parallel_limit", 4);
  if (j.contains("game")) {
    plan.base_game = sl::serde::game_config_from_json(j["game"]);
  }
  if (j.contains("weights")) {
    plan.weights = sl::serde::weights_from_json(j["weights"]);
  }
  plan.stop_after = j.value("stop_after", 0L);
  return plan;
}

}  // namespace

extern "C" {

slotlab_status slotlab_run_experiment(const char* plan_json,
                                      char** out_summary_json) {
  if (auto rc = require_arg(plan_json && out_summary_json, "plan/out");
      rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    const auto summary = sl::runner::run_experiment(plan_from_json_text(plan_json));
    const auto rc = emit(out_summary_json, summary.to_json().dump());
    if (rc != SLOTLAB_OK) sl::raise(sl::Status::Internal, "out of memory");
  });
}

slotlab_status slotlab_aggregate(const char* experiment_dir, char** out_json) {
  if (auto rc = require_arg(experiment_dir && out_json, "dir/out");
      rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    const auto agg = sl::runner::aggregate(experiment_dir);
    const auto rc = emit(out_json, sl::runner::aggregate_to_json(agg).dump());
    if (rc != SLOTLAB_OK) sl::raise(sl::Status::Internal, "out of memory");
  });
}

slotlab_status slotlab_report(const char* experiment_dir, const char* kind,
                              char** out_paths_json) {
  if (auto rc = require_arg(experiment_dir && kind && out_paths_json,
                            "dir/kind/out");
      rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    const auto paths = sl::runner::report(experiment_dir, kind);
    json out = json::array();
    for (const auto& p : paths) out.push_back(p.string());
    const auto rc = emit(out_paths_json, out.dump());
    if (rc != SLOTLAB_OK) sl::raise(sl::Status::Internal, "out of memory");
  });
}

slotlab_status slotlab_replay_trial(const char* experiment_dir,
                                    const char* trial_id, char** out_json) {
  if (auto rc = require_arg(experiment_dir && trial_id && out_json,
                            "dir/trial/out");
      rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    const auto record = sl::runner::replay_trial(experiment_dir, trial_id);
    const auto rc = emit(out_json, record.dump());
    if (rc != SLOTLAB_OK) sl::raise(sl::Status::Internal, "out of memory");
  });
}

slotlab_status slotlab_dataset_open(const char* path, int csv_layer,
                                    slotlab_dataset** out_dataset) {
  if (auto rc = require_arg(path && out_dataset, "path/out");
      rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    auto handle = std::make_unique<slotlab_dataset>();
    handle->data = sl::features::load_activations_auto(path, csv_layer);
    *out_dataset = handle.release();
  });
}

void slotlab_dataset_free(slotlab_dataset* dataset) { delete dataset; }

slotlab_status slotlab_dataset_info(const slotlab_dataset* dataset,
                                    char** out_json) {
  if (auto rc = require_arg(dataset && out_json, "dataset/out");
      rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    const auto& ds = dataset->data;
    const json info{{"layer", ds.layer},
                    {"n_features", ds.n_features},
                    {"n_trials", ds.n_trials},
                    {"n_bankrupt", ds.count(sl::features::Label::Bankrupt)},
                    {"n_safe", ds.count(sl::features::Label::Safe)}};
    const auto rc = emit(out_json, info.dump());
    if (rc != SLOTLAB_OK) sl::raise(sl::Status::Internal, "out of memory");
  });
}

}  // extern "C"

namespace {

json feature_stat_to_json(const sl::features::FeatureStat& s) {
  return json{{"layer", s.layer},
              {"feature_index", s.feature_index},
              {"mean_bankrupt", s.mean_bankrupt},
              {"mean_safe", s.mean_safe},
              {"d", s.d},
              {"p_raw", s.p_raw},
              {"p_adj", s.p_adj},
              {"passes", s.passes}};
}

json diff_result_to_json(const sl::features::DiffResult& res,
                         bool include_stats) {
  json out{{"n_features", res.n_features},
           {"n_activated", res.n_activated},
           {"n_tested", res.n_tested},
           {"n_skipped_constant", res.n_skipped_constant},
           {"n_never_activated", res.n_never_activated},
           {"n_passing", res.n_passing}};
  if (include_stats) {
    json stats = json::array();
    for (const auto& s : res.stats) stats.push_back(feature_stat_to_json(s));
    out["features"] = std::move(stats);
  }
  return out;
}

}  // namespace

extern "C" {

slotlab_status slotlab_features_diff(const slotlab_dataset* dataset,
                                     double alpha, double d_min,
                                     char** out_json) {
  if (auto rc = require_arg(dataset && out_json, "dataset/out");
      rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    const auto res = sl::features::differential_features(
        dataset->data, {alpha, d_min});
    const auto rc = emit(out_json, diff_result_to_json(res, true).dump());
    if (rc != SLOTLAB_OK) sl::raise(sl::Status::Internal, "out of memory");
  });
}

slotlab_status slotlab_features_top(const slotlab_dataset* dataset, int k,
                                    double alpha, double d_min,
                                    char** out_json) {
  if (auto rc = require_arg(dataset && out_json, "dataset/out");
      rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    sl::require(k >= 0, sl::Status::InvalidArgument, "k must be >= 0");
    const auto res = sl::features::differential_features(
        dataset->data, {alpha, d_min});
    const auto top = sl::features::max_separation(
        res.stats, static_cast<std::size_t>(k));
    json out = diff_result_to_json(res, false);
    json rows = json::array();
    for (const auto& s : top) rows.push_back(feature_stat_to_json(s));
    out["top"] = std::move(rows);
    // Published separations, attached for comparison only.
    json refs = json::array();
    for (const auto& r : sl::features::reference_max_separation_features()) {
      refs.push_back(json{{"layer", r.layer},
                          {"feature_index", r.feature_index},
                          {"d", r.d}});
    }
    out["paper_reference"] = std::move(refs);
    const auto rc = emit(out_json, out.dump());
    if (rc != SLOTLAB_OK) sl::raise(sl::Status::Internal, "out of memory");
  });
}

slotlab_status slotlab_features_layers(const slotlab_dataset* dataset,
                                       int only_passing, double alpha,
                                       double d_min, char** out_json) {
  if (auto rc = require_arg(dataset && out_json, "dataset/out");
      rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    const auto res = sl::features::differential_features(
        dataset->data, {alpha, d_min});
    const auto layers =
        sl::features::layer_distribution(res.stats, only_passing != 0);
    json rows = json::array();
    for (const auto& lc : layers) {
      rows.push_back(json{{"layer", lc.layer},
                          {"safe", lc.safe},
                          {"risky", lc.risky},
                          {"total", lc.safe + lc.risky}});
    }
    const json out{{"only_passing", only_passing != 0},
                   {"layers", std::move(rows)}};
    const auto rc = emit(out_json, out.dump());
    if (rc != SLOTLAB_OK) sl::raise(sl::Status::Internal, "out of memory");
  });
}

slotlab_status slotlab_features_mean_vectors(const slotlab_dataset* dataset,
                                             const char* out_path) {
  if (auto rc = require_arg(dataset && out_path, "dataset/path");
      rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    const auto means = sl::features::mean_vectors_dataset(dataset->data);
    sl::features::save_activations(means, out_path);
  });
}

slotlab_status slotlab_patch_effect(const char* request_json, char** out_json) {
  if (auto rc = require_arg(request_json && out_json, "request/out");
      rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    const json request = json::parse(request_json);
    auto counts = [](const json& j) {
      sl::features::OutcomeCounts c;
      c.stopped = j.value("stopped", 0L);
      c.bankrupt = j.value("bankrupt", 0L);
      c.continued = j.value("continued", 0L);
      return c;
    };
    const auto effect = sl::features::patch_effect(
        counts(request.at("baseline")), counts(request.at("patched")),
        request.value("context", "safe"),
        request.value("patch_class", "safe_features"));
    const json out{{"context", effect.context},
                   {"patch_class", effect.patch_class},
                   {"n_baseline", effect.n_baseline},
                   {"n_patched", effect.n_patched},
                   {"baseline_stopping_rate", effect.baseline_stopping_rate},
                   {"patched_stopping_rate", effect.patched_stopping_rate},
                   {"delta_stopping_rate", effect.delta_stopping_rate},
                   {"delta_stopping_se", effect.delta_stopping_se},
                   {"stopping_p", effect.stopping_p},
                   {"baseline_bankruptcy_rate", effect.baseline_bankruptcy_rate},
                   {"patched_bankruptcy_rate", effect.patched_bankruptcy_rate},
                   {"delta_bankruptcy_rate", effect.delta_bankruptcy_rate},
                   {"delta_bankruptcy_se", effect.delta_bankruptcy_se},
                   {"bankruptcy_p", effect.bankruptcy_p}};
    const auto rc = emit(out_json, out.dump());
    if (rc != SLOTLAB_OK) sl::raise(sl::Status::Internal, "out of memory");
  });
}

slotlab_status slotlab_synth_activations(const char* spec_json, uint64_t seed,
                                         const char* out_path) {
  if (auto rc = require_arg(spec_json && out_path, "spec/path");
      rc != SLOTLAB_OK) {
    return rc;
  }
  return guarded([&] {
    const json j = json::parse(spec_json);
    sl::features::SynthSpec spec;
    spec.layer = j.value("layer", 30);
    spec.n_features = j.value("n_features", 1000);
    spec.n_bankrupt = j.value("n_bankrupt", 400);
    spec.n_safe = j.value("n_safe", 400);
    if (j.contains("planted")) {
      for (const auto& pj : j["planted"]) {
        spec.planted.push_back({pj.at("feature_index").get<int>(),
                                pj.at("d").get<double>()});
      }
    }
    const auto ds = sl::features::synth_activations(spec, seed);
    sl::features::save_activations(ds, out_path);
  });
}

}  // extern "C"
