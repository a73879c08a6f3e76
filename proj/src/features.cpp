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

#include "slotlab/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "slotlab/rng.hpp"
#include "slotlab/stats.hpp"

namespace slotlab::features {

void ActivationDataset::validate() const {
  require(n_features >= 1, Status::FormatError, "dataset has no features");
  require(n_trials >= 1, Status::FormatError, "dataset has no trials");
  require(values.size() == static_cast<std::size_t>(n_features) * n_trials,
          Status::FormatError, "value matrix does not match declared shape");
  require(labels.size() == static_cast<std::size_t>(n_trials),
          Status::FormatError, "labels length does not match trial count");
  require(trial_ids.empty() ||
              trial_ids.size() == static_cast<std::size_t>(n_trials),
          Status::FormatError, "trial_ids length does not match trial count");
}

long ActivationDataset::count(Label label) const {
  return std::count(labels.begin(), labels.end(), label);
}

namespace {

struct ColumnSplit {
  std::vector<double> bankrupt;
  std::vector<double> safe;
  bool any_nonzero = false;
};

ColumnSplit split_column(const ActivationDataset& ds, int feature) {
  ColumnSplit col;
  col.bankrupt.reserve(ds.labels.size());
  col.safe.reserve(ds.labels.size());
  for (int t = 0; t < ds.n_trials; ++t) {
    const double v = ds.at(t, feature);
    if (v != 0.0f) col.any_nonzero = true;
    (ds.labels[t] == Label::Bankrupt ? col.bankrupt : col.safe).push_back(v);
  }
  return col;
}

bool column_constant(const ColumnSplit& col) {
  const double first = col.bankrupt.empty() ? col.safe.front() : col.bankrupt.front();
  for (const auto* side : {&col.bankrupt, &col.safe}) {
    for (double v : *side) {
      if (v != first) return false;
    }
  }
  return true;
}

// Per-dataset scan without the BH step; p_adj/passes are filled in later once
// the adjustment family is known.
DiffResult scan_dataset(const ActivationDataset& ds) {
  ds.validate();
  require(ds.count(Label::Bankrupt) >= 2 && ds.count(Label::Safe) >= 2,
          Status::SingleClassDataset,
          "differential features require at least two trials per class");

  DiffResult res;
  res.n_features = ds.n_features;
  for (int f = 0; f < ds.n_features; ++f) {
    const ColumnSplit col = split_column(ds, f);
    if (!col.any_nonzero) {
      ++res.n_never_activated;
      continue;
    }
    ++res.n_activated;
    if (column_constant(col)) {
      ++res.n_skipped_constant;  // no spread, Welch and d are undefined
      continue;
    }
    ++res.n_tested;
    FeatureStat stat;
    stat.layer = ds.layer;
    stat.feature_index = f;
    stat.mean_bankrupt = stats::mean(col.bankrupt);
    stat.mean_safe = stats::mean(col.safe);
    // Perfectly separated constant classes have no finite statistic; score
    // them as overwhelming evidence with an unbounded gap.
    try {
      stat.p_raw = stats::welch_t(col.bankrupt, col.safe).p_two_sided;
    } catch (const Error& e) {
      if (e.code() != Status::DegenerateInput) throw;
      stat.p_raw = 0.0;
    }
    try {
      stat.d = stats::cohens_d(col.bankrupt, col.safe);
    } catch (const Error& e) {
      if (e.code() != Status::DegenerateInput) throw;
      stat.d = stat.mean_bankrupt > stat.mean_safe
                   ? std::numeric_limits<double>::infinity()
                   : -std::numeric_limits<double>::infinity();
    }
    res.stats.push_back(stat);
  }
  return res;
}

void apply_bh(std::vector<FeatureStat*>& family, const DiffOptions& options) {
  if (family.empty()) return;
  std::vector<double> pvals;
  pvals.reserve(family.size());
  for (const FeatureStat* s : family) pvals.push_back(s->p_raw);
  const auto fdr = stats::bh_fdr(pvals, options.alpha);
  for (std::size_t i = 0; i < family.size(); ++i) {
    family[i]->p_adj = fdr.adjusted[i];
    family[i]->passes = family[i]->p_adj < options.alpha &&
                        std::abs(family[i]->d) > options.d_min;
  }
}

}  // namespace

DiffResult differential_features(const ActivationDataset& ds,
                                 const DiffOptions& options) {
  DiffResult res = scan_dataset(ds);
  std::vector<FeatureStat*> family;
  family.reserve(res.stats.size());
  for (auto& s : res.stats) family.push_back(&s);
  apply_bh(family, options);
  res.n_passing = static_cast<int>(
      std::count_if(res.stats.begin(), res.stats.end(),
                    [](const FeatureStat& s) { return s.passes; }));
  return res;
}

DiffResult differential_features(std::span<const ActivationDataset> layers,
                                 const DiffOptions& options,
                                 bool pool_bh_across_layers) {
  require(!layers.empty(), Status::EmptyInput, "no datasets given");
  DiffResult merged;
  std::vector<std::size_t> layer_begin;
  for (const auto& ds : layers) {
    DiffResult r = scan_dataset(ds);
    layer_begin.push_back(merged.stats.size());
    merged.n_features += r.n_features;
    merged.n_activated += r.n_activated;
    merged.n_tested += r.n_tested;
    merged.n_skipped_constant += r.n_skipped_constant;
    merged.n_never_activated += r.n_never_activated;
    merged.stats.insert(merged.stats.end(), r.stats.begin(), r.stats.end());
  }
  layer_begin.push_back(merged.stats.size());

  if (pool_bh_across_layers) {
    std::vector<FeatureStat*> family;
    family.reserve(merged.stats.size());
    for (auto& s : merged.stats) family.push_back(&s);
    apply_bh(family, options);
  } else {
    for (std::size_t l = 0; l + 1 < layer_begin.size(); ++l) {
      std::vector<FeatureStat*> family;
      for (std::size_t i = layer_begin[l]; i < layer_begin[l + 1]; ++i) {
        family.push_back(&merged.stats[i]);
      }
      apply_bh(family, options);
    }
  }
  merged.n_passing = static_cast<int>(
      std::count_if(merged.stats.begin(), merged.stats.end(),
                    [](const FeatureStat& s) { return s.passes; }));
  return merged;
}

std::vector<FeatureStat> max_separation(std::span<const FeatureStat> stats,
                                        std::size_t k) {
  std::vector<FeatureStat> sorted(stats.begin(), stats.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const FeatureStat& a, const FeatureStat& b) {
                     const double da = std::abs(a.d);
                     const double db = std::abs(b.d);
                     if (da != db) return da > db;
                     if (a.layer != b.layer) return a.layer < b.layer;
                     return a.feature_index < b.feature_index;
                   });
  if (sorted.size() > k) sorted.resize(k);
  return sorted;
}

std::vector<LayerCounts> layer_distribution(std::span<const FeatureStat> stats,
                                            bool only_passing) {
  std::vector<LayerCounts> out;
  auto find_layer = [&out](int layer) -> LayerCounts& {
    for (auto& lc : out) {
      if (lc.layer == layer) return lc;
    }
    out.push_back(LayerCounts{layer, 0, 0});
    return out.back();
  };
  for (const auto& s : stats) {
    if (only_passing && !s.passes) continue;
    if (s.d == 0.0) continue;  // no lean either way
    LayerCounts& lc = find_layer(s.layer);
    (s.d < 0.0 ? lc.safe : lc.risky) += 1;
  }
  std::sort(out.begin(), out.end(),
            [](const LayerCounts& a, const LayerCounts& b) {
              return a.layer < b.layer;
            });
  return out;
}

MeanVectors population_mean_vectors(const ActivationDataset& ds) {
  ds.validate();
  const long n_bankrupt = ds.count(Label::Bankrupt);
  const long n_safe = ds.count(Label::Safe);
  require(n_bankrupt >= 1 && n_safe >= 1, Status::SingleClassDataset,
          "population means require both label classes");

  MeanVectors mv;
  mv.bankrupt.assign(ds.n_features, 0.0f);
  mv.safe.assign(ds.n_features, 0.0f);
  std::vector<double> acc_bankrupt(ds.n_features, 0.0);
  std::vector<double> acc_safe(ds.n_features, 0.0);
  for (int t = 0; t < ds.n_trials; ++t) {
    auto& acc = ds.labels[t] == Label::Bankrupt ? acc_bankrupt : acc_safe;
    const float* row = ds.values.data() +
                       static_cast<std::size_t>(t) * ds.n_features;
    for (int f = 0; f < ds.n_features; ++f) acc[f] += row[f];
  }
  for (int f = 0; f < ds.n_features; ++f) {
    mv.bankrupt[f] = static_cast<float>(acc_bankrupt[f] / n_bankrupt);
    mv.safe[f] = static_cast<float>(acc_safe[f] / n_safe);
  }
  return mv;
}

ActivationDataset mean_vectors_dataset(const ActivationDataset& ds) {
  const MeanVectors mv = population_mean_vectors(ds);
  ActivationDataset out;
  out.layer = ds.layer;
  out.n_features = ds.n_features;
  out.n_trials = 2;
  out.values = mv.bankrupt;
  out.values.insert(out.values.end(), mv.safe.begin(), mv.safe.end());
  out.labels = {Label::Bankrupt, Label::Safe};
  out.trial_ids = {"bankrupt_mean", "safe_mean"};
  return out;
}

namespace {

struct RateDelta {
  double baseline = 0.0;
  double patched = 0.0;
  double delta = 0.0;
  double se = 0.0;
  double p = 1.0;
};

RateDelta two_proportion_delta(long hits_baseline, long n_baseline,
                               long hits_patched, long n_patched) {
  RateDelta rd;
  rd.baseline = static_cast<double>(hits_baseline) / n_baseline;
  rd.patched = static_cast<double>(hits_patched) / n_patched;
  rd.delta = rd.patched - rd.baseline;
  rd.se = std::sqrt(rd.baseline * (1.0 - rd.baseline) / n_baseline +
                    rd.patched * (1.0 - rd.patched) / n_patched);
  // Pooled two-proportion z-test.
  const double pooled = static_cast<double>(hits_baseline + hits_patched) /
                        static_cast<double>(n_baseline + n_patched);
  const double se0 = std::sqrt(pooled * (1.0 - pooled) *
                               (1.0 / n_baseline + 1.0 / n_patched));
  if (se0 > 0.0) {
    const double z = rd.delta / se0;
    rd.p = std::erfc(std::abs(z) / std::sqrt(2.0));
  }
  return rd;
}

}  // namespace

PatchEffect patch_effect(const OutcomeCounts& baseline,
                         const OutcomeCounts& patched,
                         std::string_view context,
                         std::string_view patch_class) {
  require(baseline.total() >= 1 && patched.total() >= 1, Status::EmptyInput,
          "patch_effect requires at least one trial per arm");
  require(baseline.stopped >= 0 && baseline.bankrupt >= 0 &&
              baseline.continued >= 0 && patched.stopped >= 0 &&
              patched.bankrupt >= 0 && patched.continued >= 0,
          Status::InvalidArgument, "outcome counts must be nonnegative");

  PatchEffect pe;
  pe.context = std::string(context);
  pe.patch_class = std::string(patch_class);
  pe.n_baseline = baseline.total();
  pe.n_patched = patched.total();

  const RateDelta stop = two_proportion_delta(baseline.stopped, pe.n_baseline,
                                              patched.stopped, pe.n_patched);
  pe.baseline_stopping_rate = stop.baseline;
  pe.patched_stopping_rate = stop.patched;
  pe.delta_stopping_rate = stop.delta;
  pe.delta_stopping_se = stop.se;
  pe.stopping_p = stop.p;

  const RateDelta bust = two_proportion_delta(baseline.bankrupt, pe.n_baseline,
                                              patched.bankrupt, pe.n_patched);
  pe.baseline_bankruptcy_rate = bust.baseline;
  pe.patched_bankruptcy_rate = bust.patched;
  pe.delta_bankruptcy_rate = bust.delta;
  pe.delta_bankruptcy_se = bust.se;
  pe.bankruptcy_p = bust.p;
  return pe;
}

void SynthSpec::validate() const {
  require(n_features >= 1, Status::InvalidArgument, "n_features must be >= 1");
  require(n_bankrupt >= 2 && n_safe >= 2, Status::InvalidArgument,
          "synthetic datasets need at least two trials per class");
  for (const auto& pf : planted) {
    require(pf.feature_index >= 0 && pf.feature_index < n_features,
            Status::InvalidArgument, "planted feature index out of range");
  }
}

ActivationDataset synth_activations(const SynthSpec& spec, std::uint64_t seed) {
  spec.validate();
  ActivationDataset ds;
  ds.layer = spec.layer;
  ds.n_features = spec.n_features;
  ds.n_trials = spec.n_bankrupt + spec.n_safe;
  ds.values.assign(static_cast<std::size_t>(ds.n_trials) * ds.n_features, 0.0f);
  ds.labels.reserve(ds.n_trials);
  ds.trial_ids.reserve(ds.n_trials);

  std::vector<double> gap(spec.n_features, 0.0);
  for (const auto& pf : spec.planted) gap[pf.feature_index] = pf.d;

  rng::Stream stream(seed);
  auto next_gaussian = [&stream]() {
    // Box-Muller on the stable u53 stream.
    double u1 = stream.next_unit();
    const double u2 = stream.next_unit();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  };

  for (int t = 0; t < ds.n_trials; ++t) {
    const bool is_bankrupt = t < spec.n_bankrupt;
    ds.labels.push_back(is_bankrupt ? Label::Bankrupt : Label::Safe);
    ds.trial_ids.push_back((is_bankrupt ? "b" : "s") + std::to_string(t));
    float* row = ds.values.data() + static_cast<std::size_t>(t) * ds.n_features;
    for (int f = 0; f < ds.n_features; ++f) {
      const double mu = is_bankrupt ? gap[f] / 2.0 : -gap[f] / 2.0;
      row[f] = static_cast<float>(mu + next_gaussian());
    }
  }
  return ds;
}

const char* to_string(Label label) {
  return label == Label::Bankrupt ? "bankrupt" : "safe";
}

Label label_from_string(const std::string& s) {
  if (s == "bankrupt") return Label::Bankrupt;
  if (s == "safe") return Label::Safe;
  raise(Status::FormatError, "unknown label: " + s);
}

std::span<const ReferenceFeature> reference_max_separation_features() {
  static const ReferenceFeature kReference[] = {
      {30, 16827, +1.669},
      {28, 25651, +1.482},
      {28, 18936, -1.282},
      {30, 18141, -1.272},
  };
  return kReference;
}

}  // namespace slotlab::features
