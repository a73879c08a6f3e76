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

#include "slotlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace slotlab::stats {

double mean(std::span<const double> v) {
  require(!v.empty(), Status::EmptyInput, "mean of empty vector");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
  require(v.size() >= 2, Status::DegenerateInput,
          "sample variance requires at least two observations");
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), Status::DegenerateInput,
          "pearson requires equal-length vectors");
  require(x.size() >= 2, Status::DegenerateInput,
          "pearson requires at least two points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  require(sxx > 0.0 && syy > 0.0, Status::DegenerateInput,
          "pearson undefined for constant input");
  return sxy / std::sqrt(sxx * syy);
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
  require(a.size() >= 2 && b.size() >= 2, Status::DegenerateInput,
          "cohens_d requires at least two observations per group");
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double v1 = sample_variance(a);
  const double v2 = sample_variance(b);
  const double pooled =
      std::sqrt(((n1 - 1.0) * v1 + (n2 - 1.0) * v2) / (n1 + n2 - 2.0));
  require(pooled > 0.0, Status::DegenerateInput,
          "cohens_d undefined for zero pooled spread");
  return (mean(a) - mean(b)) / pooled;
}

// Continued-fraction evaluation of the regularized incomplete beta function
// (Lentz's method).
namespace {

double incbeta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  require(a > 0.0 && b > 0.0, Status::InvalidArgument,
          "incomplete beta requires positive shape parameters");
  require(x >= 0.0 && x <= 1.0, Status::InvalidArgument,
          "incomplete beta requires x in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * incbeta_cf(a, b, x) / a;
  }
  return 1.0 - front * incbeta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  require(df > 0.0, Status::InvalidArgument,
          "degrees of freedom must be positive");
  if (t == 0.0) return 1.0;
  const double x = df / (df + t * t);
  return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

WelchResult welch_t(std::span<const double> a, std::span<const double> b) {
  require(a.size() >= 2 && b.size() >= 2, Status::DegenerateInput,
          "welch_t requires at least two observations per group");
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double m1 = mean(a);
  const double m2 = mean(b);
  const double q1 = sample_variance(a) / n1;
  const double q2 = sample_variance(b) / n2;
  const double se2 = q1 + q2;

  WelchResult res;
  if (se2 == 0.0) {
    require(m1 == m2, Status::DegenerateInput,
            "welch_t undefined: zero variance with unequal means");
    res.t = 0.0;
    res.df = n1 + n2 - 2.0;
    res.p_two_sided = 1.0;
    return res;
  }
  res.t = (m1 - m2) / std::sqrt(se2);
  res.df = se2 * se2 /
           (q1 * q1 / (n1 - 1.0) + q2 * q2 / (n2 - 1.0));
  res.p_two_sided = student_t_two_sided_p(res.t, res.df);
  return res;
}

FdrResult bh_fdr(std::span<const double> pvals, double q) {
  require(q > 0.0 && q < 1.0, Status::InvalidArgument,
          "FDR level must lie in (0,1)");
  for (double p : pvals) {
    require(p >= 0.0 && p <= 1.0, Status::InvalidArgument,
            "p-values must lie in [0,1]");
  }
  const std::size_t m = pvals.size();
  FdrResult res;
  res.reject.assign(m, false);
  res.adjusted.assign(m, 1.0);
  if (m == 0) return res;

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return pvals[i] < pvals[j];
  });

  // Step-up: largest i (1-based, in sorted order) with p_(i) <= i*q/m.
  std::size_t cutoff = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double threshold =
        static_cast<double>(i + 1) * q / static_cast<double>(m);
    if (pvals[order[i]] <= threshold) cutoff = i + 1;
  }
  for (std::size_t i = 0; i < cutoff; ++i) res.reject[order[i]] = true;
  res.n_rejected = static_cast<int>(cutoff);

  // Adjusted p: running minimum of m*p_(i)/i from the largest p downward.
  double running = 1.0;
  for (std::size_t i = m; i-- > 0;) {
    const double raw = pvals[order[i]] * static_cast<double>(m) /
                       static_cast<double>(i + 1);
    running = std::min(running, std::min(raw, 1.0));
    res.adjusted[order[i]] = running;
  }
  return res;
}

double component_effect(std::span<const ConditionValue> table, char component) {
  require(prompts::kCanonicalOrder.find(component) != std::string_view::npos,
          Status::InvalidArgument,
          std::string("unknown component letter: ") + component);
  require(table.size() == 32, Status::IncompleteDesign,
          "component_effect requires all 32 compositions of one style");
  bool seen[32] = {};
  const auto style = table.front().condition.style;
  double with_sum = 0.0, without_sum = 0.0;
  for (const auto& cv : table) {
    require(cv.condition.style == style, Status::IncompleteDesign,
            "component_effect table mixes betting styles");
    unsigned mask = 0;
    for (std::size_t i = 0; i < prompts::kCanonicalOrder.size(); ++i) {
      if (cv.condition.has(prompts::kCanonicalOrder[i])) mask |= 1u << i;
    }
    require(!seen[mask], Status::IncompleteDesign,
            "duplicate composition in component_effect table");
    seen[mask] = true;
    (cv.condition.has(component) ? with_sum : without_sum) += cv.value;
  }
  return with_sum / 16.0 - without_sum / 16.0;
}

ComplexityTrend complexity_trend(std::span<const ConditionValue> table) {
  require(table.size() == 32, Status::IncompleteDesign,
          "complexity_trend requires all 32 compositions of one style");
  std::array<double, 6> sums{};
  std::array<int, 6> counts{};
  for (const auto& cv : table) {
    const int c = cv.condition.component_count();
    require(c >= 0 && c <= 5, Status::InvalidArgument, "bad component count");
    sums[c] += cv.value;
    ++counts[c];
  }
  ComplexityTrend trend;
  std::array<double, 6> xs{};
  for (int c = 0; c <= 5; ++c) {
    require(counts[c] > 0, Status::IncompleteDesign,
            "complexity_trend missing a component-count bin");
    trend.mean_by_count[c] = sums[c] / counts[c];
    xs[c] = static_cast<double>(c);
  }
  try {
    trend.correlation = pearson(xs, trend.mean_by_count);
  } catch (const Error& e) {
    if (e.code() != Status::DegenerateInput) throw;
    trend.correlation = std::nullopt;  // constant metric: r undefined
  }
  return trend;
}

double standard_error_of_mean(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  return std::sqrt(sample_variance(v) / static_cast<double>(v.size()));
}

double binomial_se(double p, long n) {
  if (n <= 0) return 0.0;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace slotlab::stats
