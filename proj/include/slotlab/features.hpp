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
#include <vector>

#include "slotlab/error.hpp"

namespace slotlab::features {

enum class Label { Bankrupt, Safe };

// Per-trial feature activations recorded at the final decision of each game,
// one dataset per model layer. This file-format boundary is where an external
// encoder hands data over; everything downstream is computed here.
struct ActivationDataset {
  int layer = 0;
  int n_features = 0;
  int n_trials = 0;
  std::vector<float> values;  // row-major n_trials x n_features
  std::vector<Label> labels;
  std::vector<std::string> trial_ids;

  float at(int trial, int feature) const {
    return values[static_cast<std::size_t>(trial) * n_features + feature];
  }
  void validate() const;
  long count(Label label) const;
};

struct FeatureStat {
  int layer = 0;
  int feature_index = 0;
  double mean_bankrupt = 0.0;
  double mean_safe = 0.0;
  double d = 0.0;  // positive = risky-leaning, negative = safe-leaning
  double p_raw = 1.0;
  double p_adj = 1.0;
  bool passes = false;  // p_adj < alpha AND |d| > d_min
};

struct DiffOptions {
  double alpha = 0.001;
  double d_min = 0.3;
};

struct DiffResult {
  std::vector<FeatureStat> stats;  // tested features, in feature order
  int n_features = 0;
  int n_activated = 0;         // nonzero in at least one trial
  int n_tested = 0;            // activated with testable variance
  int n_skipped_constant = 0;  // activated but constant (untestable)
  int n_never_activated = 0;   // all-zero columns, excluded from testing
  int n_passing = 0;
};

// Welch p-value + Cohen's d per feature, BH-adjusted across all tested
// features of the dataset. Requires at least two trials per label class.
DiffResult differential_features(const ActivationDataset& ds,
                                 const DiffOptions& options = {});

// Multi-layer variant. BH families are per layer by default; pooling across
// layers is opt-in since the adjustment family changes what "significant"
// means.
DiffResult differential_features(std::span<const ActivationDataset> layers,
                                 const DiffOptions& options,
                                 bool pool_bh_across_layers);

// Top-k by |d| descending; ties break by (layer, feature_index).
std::vector<FeatureStat> max_separation(std::span<const FeatureStat> stats,
                                        std::size_t k);

struct LayerCounts {
  int layer = 0;
  int safe = 0;   // d < 0
  int risky = 0;  // d > 0
};

std::vector<LayerCounts> layer_distribution(std::span<const FeatureStat> stats,
                                            bool only_passing);

// Per-feature class means, the payload for population-mean activation
// patching by an external executor.
struct MeanVectors {
  std::vector<float> bankrupt;
  std::vector<float> safe;
};

MeanVectors population_mean_vectors(const ActivationDataset& ds);

// The same means packaged as a two-row dataset so they travel in the
// standard activation file format.
ActivationDataset mean_vectors_dataset(const ActivationDataset& ds);

// ---- Patching-effect statistics -------------------------------------------

struct OutcomeCounts {
  long stopped = 0;   // voluntary stop
  long bankrupt = 0;
  long continued = 0; // still playing at the observation cutoff

  long total() const { return stopped + bankrupt + continued; }
};

struct PatchEffect {
  std::string context;      // "safe" | "risky"
  std::string patch_class;  // "safe_features" | "risky_features"
  double baseline_stopping_rate = 0.0;
  double patched_stopping_rate = 0.0;
  double delta_stopping_rate = 0.0;  // patched - baseline (absolute)
  double delta_stopping_se = 0.0;
  double stopping_p = 1.0;  // two-proportion z-test, two-sided
  double baseline_bankruptcy_rate = 0.0;
  double patched_bankruptcy_rate = 0.0;
  double delta_bankruptcy_rate = 0.0;
  double delta_bankruptcy_se = 0.0;
  double bankruptcy_p = 1.0;
  long n_baseline = 0;
  long n_patched = 0;
};

PatchEffect patch_effect(const OutcomeCounts& baseline,
                         const OutcomeCounts& patched,
                         std::string_view context,
                         std::string_view patch_class);

// ---- Synthetic-data oracle -------------------------------------------------

struct PlantedFeature {
  int feature_index = 0;
  double d = 0.0;  // true standardized gap, bankrupt minus safe
};

struct SynthSpec {
  int layer = 30;
  int n_features = 1000;
  int n_bankrupt = 400;
  int n_safe = 400;
  std::vector<PlantedFeature> planted;  // remaining features are null (d = 0)

  void validate() const;
};

// Two unit-variance Gaussian populations per feature with mean gap equal to
// the planted d (symmetric around zero). Deterministic per seed.
ActivationDataset synth_activations(const SynthSpec& spec, std::uint64_t seed);

// ---- Activation file I/O ---------------------------------------------------
//
// Binary format: one JSON metadata line
//   {"layer":L,"n_features":F,"n_trials":T,"dtype":"f32le",
//    "order":"row-major","labels":[...],"trial_ids":[...]}
// terminated by '\n', followed by T*F little-endian float32 values.
// CSV alternative for small files: header "feature_0,...,feature_{F-1},label",
// one row per trial, label in {bankrupt,safe}.

void save_activations(const ActivationDataset& ds,
                      const std::filesystem::path& path);
ActivationDataset load_activations(const std::filesystem::path& path);

void save_activations_csv(const ActivationDataset& ds,
                          const std::filesystem::path& path);
ActivationDataset load_activations_csv(const std::filesystem::path& path,
                                       int layer = 0);

// Dispatches on content: '{' starts the binary header, anything else is CSV.
ActivationDataset load_activations_auto(const std::filesystem::path& path,
                                        int csv_layer = 0);

const char* to_string(Label label);
Label label_from_string(const std::string& s);

// Reference feature separations reported for the original experiments; used
// purely as comparison annotations in reports, never asserted by tests.
struct ReferenceFeature {
  int layer;
  int feature_index;
  double d;
};
std::span<const ReferenceFeature> reference_max_separation_features();

}  // namespace slotlab::features
