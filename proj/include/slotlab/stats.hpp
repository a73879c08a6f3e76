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

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "slotlab/error.hpp"
#include "slotlab/prompts.hpp"

namespace slotlab::stats {

double mean(std::span<const double> v);
double sample_variance(std::span<const double> v);  // n-1 denominator

// Sample Pearson correlation. Throws DegenerateInput for size mismatch,
// fewer than two points, or zero variance in either argument.
double pearson(std::span<const double> x, std::span<const double> y);

// Standardized mean difference (mean(a) - mean(b)) / pooled SD.
double cohens_d(std::span<const double> a, std::span<const double> b);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_sided = 1.0;
};

// Welch's unequal-variance two-sample t-test with Welch-Satterthwaite df.
// Identical inputs (zero pooled spread, zero difference) give t=0, p=1.
WelchResult welch_t(std::span<const double> a, std::span<const double> b);

struct FdrResult {
  std::vector<bool> reject;      // Benjamini-Hochberg step-up at level q
  std::vector<double> adjusted;  // monotone BH-adjusted p-values
  int n_rejected = 0;
};

FdrResult bh_fdr(std::span<const double> pvals, double q);

// Regularized incomplete beta I_x(a, b); exposed for verification against
// independent quadrature.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided tail probability of Student's t with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

// ---- Factorial-design analytics over 32-condition tables -----------------

struct ConditionValue {
  prompts::ConditionCode condition;
  double value = 0.0;
};

// Mean of the metric over the 16 conditions containing `component` minus the
// mean over the 16 without it. The table must hold exactly the 32
// compositions of one betting style (IncompleteDesign otherwise).
double component_effect(std::span<const ConditionValue> table, char component);

struct ComplexityTrend {
  std::array<double, 6> mean_by_count{};  // 0..5 components
  std::optional<double> correlation;      // absent when the metric is constant
};

ComplexityTrend complexity_trend(std::span<const ConditionValue> table);

// Standard error helpers used for aggregate tables.
double standard_error_of_mean(std::span<const double> v);
double binomial_se(double p, long n);

}  // namespace slotlab::stats
