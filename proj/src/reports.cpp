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

#include <charconv>
#include <fstream>

#include "slotlab/runner.hpp"

namespace slotlab::runner {

namespace {

std::string num(double v) {
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const char* style_name(game::BettingStyle::Kind kind) {
  return kind == game::BettingStyle::Kind::Fixed ? "fixed" : "variable";
}

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), Status::IoError, "cannot write report: " + path.string());
  return out;
}

// value extractors shared by the factorial reports
struct MetricColumn {
  const char* name;
  double (*get)(const BehaviorSummary&);
};

constexpr MetricColumn kEffectMetrics[] = {
    {"bankruptcy_rate", [](const BehaviorSummary& s) { return s.bankruptcy_rate; }},
    {"index", [](const BehaviorSummary& s) { return s.mean_index; }},
    {"rounds", [](const BehaviorSummary& s) { return s.mean_rounds; }},
    {"total_bet", [](const BehaviorSummary& s) { return s.mean_total_bet; }},
};

std::vector<ConditionAggregate> style_slice(const ExperimentAggregate& agg,
                                            game::BettingStyle::Kind kind) {
  std::vector<ConditionAggregate> out;
  for (const auto& ca : agg.per_condition) {
    if (ca.condition.style == kind) out.push_back(ca);
  }
  return out;
}

std::vector<game::BettingStyle::Kind> styles_present(
    const ExperimentAggregate& agg) {
  std::vector<game::BettingStyle::Kind> out;
  for (const auto kind : {game::BettingStyle::Kind::Fixed,
                          game::BettingStyle::Kind::Variable}) {
    if (!style_slice(agg, kind).empty()) out.push_back(kind);
  }
  return out;
}

std::filesystem::path write_table2(const ExperimentAggregate& agg,
                                   const std::filesystem::path& reports_dir) {
  const auto path = reports_dir / "table2.csv";
  auto out = open_csv(path);
  out << "style,n_games,bankrupt_pct,bankrupt_se_pct,index,index_se,"
         "rounds,rounds_se,total_bet,total_bet_se,net_pl,net_pl_se\n";
  for (const auto& [style, s] : agg.per_style) {
    out << style << ',' << s.n_games << ',' << num(100.0 * s.bankruptcy_rate)
        << ',' << num(100.0 * s.bankruptcy_se) << ',' << num(s.mean_index)
        << ',' << num(s.index_se) << ',' << num(s.mean_rounds) << ','
        << num(s.rounds_se) << ',' << num(s.mean_total_bet) << ','
        << num(s.total_bet_se) << ',' << num(s.mean_net_pl) << ','
        << num(s.net_pl_se) << '\n';
  }
  return path;
}

std::filesystem::path write_table2_reference(
    const std::filesystem::path& reports_dir) {
  const auto path = reports_dir / "table2_paper_reference.csv";
  auto out = open_csv(path);
  out << "source,model,style,bankrupt_pct,bankrupt_se_pct,index,index_se,"
         "rounds,rounds_se,total_bet,total_bet_se,net_pl,net_pl_se\n";
  for (const auto& row : reference_summary_rows()) {
    out << "paper_reference," << row.model << ',' << row.style << ','
        << num(row.bankrupt_pct) << ',' << num(row.bankrupt_se_pct) << ','
        << num(row.index) << ',' << num(row.index_se) << ',' << num(row.rounds)
        << ',' << num(row.rounds_se) << ',' << num(row.total_bet) << ','
        << num(row.total_bet_se) << ',' << num(row.net_pl) << ','
        << num(row.net_pl_se) << '\n';
  }
  return path;
}

std::filesystem::path write_scatter(const ExperimentAggregate& agg,
                                    const std::filesystem::path& reports_dir) {
  const auto path = reports_dir / "scatter.csv";
  auto out = open_csv(path);
  out << "condition,composition,style,n_components,index,bankruptcy_rate\n";
  for (const auto& ca : agg.per_condition) {
    out << ca.condition.canonical() << ',' << ca.condition.composition() << ','
        << style_name(ca.condition.style) << ','
        << ca.condition.component_count() << ',' << num(ca.summary.mean_index)
        << ',' << num(ca.summary.bankruptcy_rate) << '\n';
  }
  return path;
}

std::filesystem::path write_components(const ExperimentAggregate& agg,
                                       const std::filesystem::path& reports_dir) {
  const auto path = reports_dir / "component_effects.csv";
  auto out = open_csv(path);
  out << "component,style";
  for (const auto& metric : kEffectMetrics) out << ',' << metric.name << "_effect";
  out << '\n';
  for (const auto kind : styles_present(agg)) {
    const auto slice = style_slice(agg, kind);
    for (const char component : prompts::kCanonicalOrder) {
      out << component << ',' << style_name(kind);
      for (const auto& metric : kEffectMetrics) {
        std::vector<stats::ConditionValue> table;
        table.reserve(slice.size());
        for (const auto& ca : slice) {
          table.push_back({ca.condition, metric.get(ca.summary)});
        }
        out << ',' << num(stats::component_effect(table, component));
      }
      out << '\n';
    }
  }
  return path;
}

std::filesystem::path write_complexity(const ExperimentAggregate& agg,
                                       const std::filesystem::path& reports_dir) {
  const auto path = reports_dir / "complexity_trend.csv";
  auto out = open_csv(path);
  out << "style,n_components";
  for (const auto& metric : kEffectMetrics) out << ',' << metric.name;
  out << '\n';
  for (const auto kind : styles_present(agg)) {
    const auto slice = style_slice(agg, kind);
    std::vector<stats::ComplexityTrend> trends;
    for (const auto& metric : kEffectMetrics) {
      std::vector<stats::ConditionValue> table;
      table.reserve(slice.size());
      for (const auto& ca : slice) {
        table.push_back({ca.condition, metric.get(ca.summary)});
      }
      trends.push_back(stats::complexity_trend(table));
    }
    for (int count = 0; count <= 5; ++count) {
      out << style_name(kind) << ',' << count;
      for (const auto& trend : trends) out << ',' << num(trend.mean_by_count[count]);
      out << '\n';
    }
    out << style_name(kind) << ",r";
    for (const auto& trend : trends) {
      out << ',' << (trend.correlation ? num(*trend.correlation) : "undefined");
    }
    out << '\n';
  }
  return path;
}

std::filesystem::path write_streaks(const ExperimentAggregate& agg,
                                    const std::filesystem::path& reports_dir) {
  const auto path = reports_dir / "streaks.csv";
  auto out = open_csv(path);
  out << "streak_type,k,eligible,continued,increased,continuation_rate,"
         "bet_increase_rate\n";
  for (const auto outcome : {game::Outcome::Win, game::Outcome::Loss}) {
    for (int k = 1; k <= 5; ++k) {
      const auto& cell = agg.streaks.cell(outcome, k);
      out << game::to_string(outcome) << ',' << k << ',' << cell.eligible << ','
          << cell.continued << ',' << cell.increased << ','
          << num(cell.continuation_rate()) << ','
          << num(cell.bet_increase_rate()) << '\n';
    }
  }
  return path;
}

}  // namespace

std::vector<std::filesystem::path> report(const std::filesystem::path& dir,
                                          std::string_view kind) {
  const ExperimentAggregate agg = aggregate(dir);
  const auto reports_dir = dir / "reports";
  std::filesystem::create_directories(reports_dir);

  if (kind == "table2") {
    return {write_table2(agg, reports_dir),
            write_table2_reference(reports_dir)};
  }
  if (kind == "scatter" || kind == "scatter_index_bankruptcy") {
    return {write_scatter(agg, reports_dir)};
  }
  if (kind == "components" || kind == "component_effects") {
    return {write_components(agg, reports_dir)};
  }
  if (kind == "complexity" || kind == "complexity_trend") {
    return {write_complexity(agg, reports_dir)};
  }
  if (kind == "streaks") {
    return {write_streaks(agg, reports_dir)};
  }
  raise(Status::UnknownReport, "unknown report kind: " + std::string(kind));
}

std::span<const ReferenceSummaryRow> reference_summary_rows() {
  static const ReferenceSummaryRow kRows[] = {
      {"gpt-4o-mini", "fixed", 0.00, 0.0, 0.025, 0.000, 1.79, 0.06, 17.93, 0.60,
       -1.69, 0.44},
      {"gpt-4o-mini", "variable", 21.31, 1.02, 0.172, 0.005, 5.46, 0.18, 128.30,
       6.01, -11.00, 3.09},
      {"gpt-4.1-mini", "fixed", 0.00, 0.0, 0.031, 0.000, 2.56, 0.08, 25.56,
       0.76, -1.60, 0.55},
      {"gpt-4.1-mini", "variable", 6.31, 0.61, 0.077, 0.002, 7.60, 0.27, 82.30,
       3.59, -7.41, 1.47},
      {"gemini-2.5-flash", "fixed", 3.12, 0.44, 0.042, 0.001, 5.84, 0.20, 58.44,
       1.95, -5.34, 0.85},
      {"gemini-2.5-flash", "variable", 48.06, 1.25, 0.265, 0.005, 3.94, 0.13,
       176.68, 17.02, -27.00, 2.84},
      {"claude-3.5-haiku", "fixed", 0.00, 0.0, 0.041, 0.000, 5.15, 0.14, 51.49,
       1.40, -4.90, 0.73},
      {"claude-3.5-haiku", "variable", 20.50, 1.01, 0.186, 0.003, 27.52, 0.62,
       483.12, 23.37, -51.77, 2.02},
  };
  return kRows;
}

}  // namespace slotlab::runner
