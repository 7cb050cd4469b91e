#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tankest/exact.hpp"
#include "tankest/model.hpp"
#include "tankest/simulate.hpp"

namespace tankest {

/// Exact header of the results CSV.
inline constexpr std::string_view kResultsHeader =
    "N,k,estimator,reps,mean,bias,variance,mse";

/// One row of a comparison table: either simulated (reps set) or exact
/// (reps empty, rendered as the word `exact`).
struct ResultRow {
  std::int64_t N = 0;
  std::int64_t k = 0;
  EstimatorId estimator = EstimatorId::mom;
  std::optional<std::int64_t> reps;
  double mean = 0.0;
  double bias = 0.0;
  double variance = 0.0;
  double mse = 0.0;

  [[nodiscard]] bool is_exact() const noexcept { return !reps.has_value(); }
};

[[nodiscard]] ResultRow to_row(const SummaryStats& s);
[[nodiscard]] ResultRow to_row(const ExactMoments& m);
[[nodiscard]] std::vector<ResultRow> to_rows(std::span<const SummaryStats> s);
[[nodiscard]] std::vector<ResultRow> to_rows(std::span<const ExactMoments> m);

/// Six significant digits, printf `%.6g` style, never `-0`.
[[nodiscard]] std::string format_number(double value);

enum class TableFormat { csv, markdown };

/// Renders rows with the results columns. Rows must be nonempty and all of
/// one kind (all simulated or all exact); otherwise UsageError.
[[nodiscard]] std::string render_table(std::span<const ResultRow> rows,
                                       TableFormat format);

/// Parses a results CSV. DataError (with line number) on a wrong header,
/// wrong field count, unknown estimator or unparsable number.
[[nodiscard]] std::vector<ResultRow> parse_results_csv(std::istream& in);

enum class Criterion { mse, variance, abs_bias };

[[nodiscard]] std::string_view to_string(Criterion c) noexcept;
/// Accepts `mse`, `variance`, `abs_bias`; UsageError otherwise.
[[nodiscard]] Criterion parse_criterion(std::string_view name);
[[nodiscard]] double criterion_value(const ResultRow& row, Criterion c);

struct RankEntry {
  EstimatorId estimator = EstimatorId::mom;
  double value = 0.0;
};

/// Ascending by criterion; equal values fall back to canonical estimator
/// order. All rows must share one (N, k) and name distinct estimators,
/// otherwise UsageError.
[[nodiscard]] std::vector<RankEntry> rank_estimators(
    std::span<const ResultRow> rows, Criterion criterion);

/// Histogram plot written for one (cell, estimator).
struct PlotRef {
  std::int64_t N = 0;
  std::int64_t k = 0;
  EstimatorId estimator = EstimatorId::mom;
  std::string path;
};

struct ReportInput {
  /// Table rows; grouped into cells by (N, k).
  std::vector<ResultRow> results;
  /// Exact reference rows, shown beside simulated tables when present.
  std::vector<ResultRow> exact;
  /// Empirical quantile summaries, when raw estimates were available.
  std::vector<SummaryStats> descriptive;
  std::vector<PlotRef> plots;
  Criterion criterion = Criterion::mse;
};

/// Overall ranking across cells: mean rank position, ties in canonical order.
/// For a single cell this is that cell's ranking.
[[nodiscard]] std::vector<RankEntry> overall_ranking(
    std::span<const ResultRow> results, Criterion criterion);

/// Markdown report: settings, per-cell comparison tables, rankings, a
/// recommendation citing the winner's bias and mse from the tables, and
/// plot references.
[[nodiscard]] std::string render_report(const ReportInput& input);

}  // namespace tankest
