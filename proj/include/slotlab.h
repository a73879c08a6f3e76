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

/*
 * C API of the slotlab shared library.
 *
 * Conventions:
 *   - Every fallible call returns a slotlab_status; SLOTLAB_OK is 0.
 *   - On failure, slotlab_last_error() returns a thread-local message that
 *     stays valid until the next failing call on the same thread.
 *   - Strings returned through char** out-parameters are heap-allocated and
 *     must be released with slotlab_string_free().
 *   - Structured inputs and outputs travel as JSON text; the schemas are
 *     documented in the project README.
 */

#ifndef SLOTLAB_H
#define SLOTLAB_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum slotlab_status {
  SLOTLAB_OK = 0,
  SLOTLAB_ERR_INVALID_ARGUMENT = 1,
  SLOTLAB_ERR_ILLEGAL_BET = 2,
  SLOTLAB_ERR_STATE_NOT_ACTIVE = 3,
  SLOTLAB_ERR_PARSE_FAILURE = 4,
  SLOTLAB_ERR_AGENT_UNAVAILABLE = 5,
  SLOTLAB_ERR_DEGENERATE_INPUT = 6,
  SLOTLAB_ERR_INCOMPLETE_DESIGN = 7,
  SLOTLAB_ERR_EMPTY_INPUT = 8,
  SLOTLAB_ERR_SINGLE_CLASS_DATASET = 9,
  SLOTLAB_ERR_IO = 10,
  SLOTLAB_ERR_FORMAT = 11,
  SLOTLAB_ERR_OUTPUT_CONFLICT = 12,
  SLOTLAB_ERR_UNKNOWN_REPORT = 13,
  SLOTLAB_ERR_INTERNAL = 14
} slotlab_status;

const char* slotlab_version(void);

/* Thread-local message describing the most recent failure on this thread. */
const char* slotlab_last_error(void);

void slotlab_string_free(char* s);

/* ---- Prompt composition --------------------------------------------------
 * request_json: {"condition":"GPW-variable","balance":100,
 *                "consecutive_losses":0,"history":[<round records>],
 *                "game":{<optional config overrides>},
 *                "template_dir":"<optional override directory>"}
 */
slotlab_status slotlab_compose(const char* request_json, char** out_prompt);

/* ---- Interactive game handle --------------------------------------------- */

typedef struct slotlab_game slotlab_game;

slotlab_status slotlab_game_new(const char* config_json, uint64_t seed,
                                slotlab_game** out_game);
void slotlab_game_free(slotlab_game* game);

/* Full state as JSON: balance, round, history, consecutive_losses, status. */
slotlab_status slotlab_game_state(const slotlab_game* game, char** out_json);

/* out_has_range = 0 means no stake is affordable (the game is over). */
slotlab_status slotlab_game_legal_range(const slotlab_game* game,
                                        int* out_has_range, double* out_min,
                                        double* out_max);

slotlab_status slotlab_game_bet(slotlab_game* game, double amount);
slotlab_status slotlab_game_quit(slotlab_game* game);

/* Irrationality metrics of the transcript so far. */
slotlab_status slotlab_game_metrics(const slotlab_game* game, char** out_json);

/* Prompt for the current state under a condition code such as "GPW". */
slotlab_status slotlab_game_prompt(const slotlab_game* game,
                                   const char* condition, char** out_prompt);

/* ---- Experiments -----------------------------------------------------------
 * plan_json: {"agent":{...},"conditions":"all"|[...],"style":"both",
 *             "replications":50,"master_seed":42,"output_dir":"DIR",
 *             "parallel_limit":8,"game":{...},"weights":{...},
 *             "stop_after":0}
 */
slotlab_status slotlab_run_experiment(const char* plan_json,
                                      char** out_summary_json);

slotlab_status slotlab_aggregate(const char* experiment_dir, char** out_json);

/* kind: table2 | scatter | components | complexity | streaks.
 * out_paths_json is a JSON array of the files written. */
slotlab_status slotlab_report(const char* experiment_dir, const char* kind,
                              char** out_paths_json);

slotlab_status slotlab_replay_trial(const char* experiment_dir,
                                    const char* trial_id, char** out_json);

/* ---- Feature lab ----------------------------------------------------------- */

typedef struct slotlab_dataset slotlab_dataset;

/* Opens an activation file (binary header format or CSV; CSV rows take
 * csv_layer as their layer). */
slotlab_status slotlab_dataset_open(const char* path, int csv_layer,
                                    slotlab_dataset** out_dataset);
void slotlab_dataset_free(slotlab_dataset* dataset);

slotlab_status slotlab_dataset_info(const slotlab_dataset* dataset,
                                    char** out_json);

/* Differential features at the joint criterion (adjusted p < alpha and
 * |d| > d_min). out_json holds counts plus per-feature stats. */
slotlab_status slotlab_features_diff(const slotlab_dataset* dataset,
                                     double alpha, double d_min,
                                     char** out_json);

/* Top-k features by |Cohen's d|. */
slotlab_status slotlab_features_top(const slotlab_dataset* dataset, int k,
                                    double alpha, double d_min,
                                    char** out_json);

/* Per-layer counts of safe (d<0) and risky (d>0) features. */
slotlab_status slotlab_features_layers(const slotlab_dataset* dataset,
                                       int only_passing, double alpha,
                                       double d_min, char** out_json);

/* Writes class-mean activation vectors in the activation file format. */
slotlab_status slotlab_features_mean_vectors(const slotlab_dataset* dataset,
                                             const char* out_path);

/* request_json: {"baseline":{"stopped":10,"bankrupt":5,"continued":15},
 *                "patched":{...},"context":"safe",
 *                "patch_class":"safe_features"} */
slotlab_status slotlab_patch_effect(const char* request_json, char** out_json);

/* spec_json: {"layer":30,"n_features":1000,"n_bankrupt":400,"n_safe":400,
 *             "planted":[{"feature_index":0,"d":1.5},...]} */
slotlab_status slotlab_synth_activations(const char* spec_json, uint64_t seed,
                                         const char* out_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SLOTLAB_H */
