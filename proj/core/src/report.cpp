#include "tankest/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "tankest/errors.hpp"
#include "tankest/estimators.hpp"

namespace tankest {
namespace {

using Cell = std::pair<std::int64_t, std::int64_t>;

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::map<Cell, std::vector<ResultRow>> group_by_cell(
    std::span<const ResultRow> rows) {
  std::map<Cell, std::vector<ResultRow>> cells;
  for (const auto& row : rows) cells[{row.N, row.k}].push_back(row);
  for (auto& [cell, members] : cells) {
    std::stable_sort(members.begin(), members.end(),
                     [](const ResultRow& a, const ResultRow& b) {
                       return a.estimator < b.estimator;
                     });
  }
  return cells;
}

std::string cell_label(std::int64_t N, std::int64_t k) {
  return "N = " + std::to_string(N) + ", k = " + std::to_string(k);
}

std::string join_ids(const std::set<EstimatorId>& ids) {
  std::string out;
  for (const auto id : ids) {
    if (!out.empty()) out += ", ";
    out += to_string(id);
  }
  return out;
}

void render_quantile_table(std::ostringstream& out,
                           std::span<const SummaryStats> stats) {
  out << "| estimator | min | q25 | median | q75 | max |\n"
      << "|---|---|---|---|---|---|\n";
  for (const auto& s : stats) {
    out << "| " << to_string(s.estimator) << " | " << format_number(s.min)
        << " | " << format_number(s.q25) << " | " << format_number(s.median)
        << " | " << format_number(s.q75) << " | " << format_number(s.max)
        << " |\n";
  }
}

}  // namespace

ResultRow to_row(const SummaryStats& s) {
  return {s.N, s.k, s.estimator, s.reps, s.mean, s.bias, s.variance, s.mse};
}

ResultRow to_row(const ExactMoments& m) {
  return {m.N,
          m.k,
          m.estimator,
          std::nullopt,
          to_double(m.mean),
          to_double(m.bias),
          to_double(m.variance),
          to_double(m.mse)};
}

std::vector<ResultRow> to_rows(std::span<const SummaryStats> s) {
  std::vector<ResultRow> rows;
  for (const auto& x : s) rows.push_back(to_row(x));
  return rows;
}

std::vector<ResultRow> to_rows(std::span<const ExactMoments> m) {
  std::vector<ResultRow> rows;
  for (const auto& x : m) rows.push_back(to_row(x));
  return rows;
}

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string render_table(std::span<const ResultRow> rows, TableFormat format) {
  if (rows.empty()) throw UsageError("cannot render an empty table");
  const bool exact = rows.front().is_exact();
  for (const auto& row : rows) {
    if (row.is_exact() != exact) {
      throw UsageError("table mixes simulated and exact rows");
    }
  }

  std::ostringstream out;
  const auto reps_text = [](const ResultRow& r) {
    return r.reps ? std::to_string(*r.reps) : std::string("exact");
  };
  if (format == TableFormat::csv) {
    out << kResultsHeader << '\n';
    for (const auto& r : rows) {
      out << r.N << ',' << r.k << ',' << to_string(r.estimator) << ','
          << reps_text(r) << ',' << format_number(r.mean) << ','
          << format_number(r.bias) << ',' << format_number(r.variance) << ','
          << format_number(r.mse) << '\n';
    }
  } else {
    out << "| N | k | estimator | reps | mean | bias | variance | mse |\n"
        << "|---:|---:|---|---:|---:|---:|---:|---:|\n";
    for (const auto& r : rows) {
      out << "| " << r.N << " | " << r.k << " | " << to_string(r.estimator)
          << " | " << reps_text(r) << " | " << format_number(r.mean) << " | "
          << format_number(r.bias) << " | " << format_number(r.variance)
          << " | " << format_number(r.mse) << " |\n";
    }
  }
  return out.str();
}

std::vector<ResultRow> parse_results_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  const auto strip_cr = [](std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  };

  if (!std::getline(in, line)) throw DataError("results file is empty");
  ++line_no;
  strip_cr(line);
  if (line != kResultsHeader) {
    throw DataError("line 1: expected header '" + std::string(kResultsHeader) +
                    "'");
  }

  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    const auto fields = split_commas(line);
    if (fields.size() != 8) {
      throw DataError(where + "expected 8 fields, found " +
                      std::to_string(fields.size()));
    }
    ResultRow row;
    if (!parse_number(fields[0], row.N) || row.N < 1 ||
        !parse_number(fields[1], row.k) || row.k < 1) {
      throw DataError(where + "N and k must be positive integers");
    }
    try {
      row.estimator = parse_estimator_id(fields[2]);
    } catch (const UsageError& e) {
      throw DataError(where + e.what());
    }
    if (fields[3] != "exact") {
      std::int64_t reps = 0;
      if (!parse_number(fields[3], reps) || reps < 1) {
        throw DataError(where + "reps must be a positive integer or 'exact'");
      }
      row.reps = reps;
    }
    double* targets[] = {&row.mean, &row.bias, &row.variance, &row.mse};
    for (std::size_t i = 0; i < 4; ++i) {
      if (!parse_number(fields[4 + i], *targets[i]) ||
          !std::isfinite(*targets[i])) {
        throw DataError(where + "field " + std::to_string(5 + i) +
                        " is not a finite number");
      }
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw DataError("results file has no data rows");
  return rows;
}

std::string_view to_string(Criterion c) noexcept {
  switch (c) {
    case Criterion::mse:
      return "mse";
    case Criterion::variance:
      return "variance";
    case Criterion::abs_bias:
      return "abs_bias";
  }
  return "unknown";
}

Criterion parse_criterion(std::string_view name) {
  for (const auto c : {Criterion::mse, Criterion::variance, Criterion::abs_bias}) {
    if (to_string(c) == name) return c;
  }
  throw UsageError("unknown criterion '" + std::string(name) +
                   "' (expected mse, variance or abs_bias)");
}

double criterion_value(const ResultRow& row, Criterion c) {
  switch (c) {
    case Criterion::mse:
      return row.mse;
    case Criterion::variance:
      return row.variance;
    case Criterion::abs_bias:
      return std::abs(row.bias);
  }
  return row.mse;
}

std::vector<RankEntry> rank_estimators(std::span<const ResultRow> rows,
                                       Criterion criterion) {
  if (rows.empty()) throw UsageError("nothing to rank");
  std::set<EstimatorId> seen;
  std::vector<RankEntry> ranking;
  for (const auto& row : rows) {
    if (row.N != rows.front().N || row.k != rows.front().k) {
      throw UsageError("rank_estimators: rows span more than one (N, k) cell");
    }
    if (!seen.insert(row.estimator).second) {
      throw UsageError("rank_estimators: estimator '" +
                       std::string(to_string(row.estimator)) +
                       "' appears twice in one cell");
    }
    ranking.push_back({row.estimator, criterion_value(row, criterion)});
  }
  std::sort(ranking.begin(), ranking.end(),
            [](const RankEntry& a, const RankEntry& b) {
              if (a.value != b.value) return a.value < b.value;
              return a.estimator < b.estimator;
            });
  return ranking;
}

std::vector<RankEntry> overall_ranking(std::span<const ResultRow> results,
                                       Criterion criterion) {
  const auto cells = group_by_cell(results);
  if (cells.size() == 1) {
    return rank_estimators(cells.begin()->second, criterion);
  }
  std::map<EstimatorId, std::pair<double, int>> positions;
  for (const auto& [cell, rows] : cells) {
    const auto ranking = rank_estimators(rows, criterion);
    for (std::size_t i = 0; i < ranking.size(); ++i) {
      auto& [sum, count] = positions[ranking[i].estimator];
      sum += static_cast<double>(i + 1);
      ++count;
    }
  }
  std::vector<RankEntry> overall;
  for (const auto& [id, p] : positions) {
    overall.push_back({id, p.first / p.second});
  }
  std::stable_sort(overall.begin(), overall.end(),
                   [](const RankEntry& a, const RankEntry& b) {
                     return a.value < b.value;
                   });
  return overall;
}

std::string render_report(const ReportInput& input) {
  if (input.results.empty()) throw UsageError("report needs at least one cell");
  const auto cells = group_by_cell(input.results);
  const auto exact_cells = group_by_cell(input.exact);
  const std::string crit(to_string(input.criterion));

  std::set<EstimatorId> ids;
  std::set<std::int64_t> reps;
  bool any_exact = false;
  for (const auto& r : input.results) {
    ids.insert(r.estimator);
    if (r.reps) reps.insert(*r.reps);
    any_exact = any_exact || r.is_exact();
  }

  std::ostringstream out;
  out << "# Population size estimation report\n\n";

  out << "## Settings\n\n";
  out << "- Source: ";
  if (!reps.empty()) {
    out << "Monte Carlo simulation (";
    bool first = true;
    for (const auto r : reps) {
      out << (first ? "" : ", ") << r;
      first = false;
    }
    out << " replications per cell)";
    if (any_exact) out << " and exact sampling moments";
  } else {
    out << "exact sampling moments";
  }
  out << "\n- Settings (N, k):";
  bool first = true;
  for (const auto& [cell, rows] : cells) {
    out << (first ? " " : ", ") << '(' << cell.first << ", " << cell.second
        << ')';
    first = false;
  }
  out << "\n- Estimators: " << join_ids(ids) << "\n";
  out << "- Ranking criterion: " << crit << " (lower is better)\n\n";

  out << "## Comparison tables\n\n";
  for (const auto& [cell, rows] : cells) {
    out << "### " << cell_label(cell.first, cell.second) << "\n\n";
    out << render_table(rows, TableFormat::markdown) << '\n';
    const auto ex = exact_cells.find(cell);
    if (ex != exact_cells.end() && !rows.front().is_exact()) {
      out << "Exact sampling moments for this setting:\n\n"
          << render_table(ex->second, TableFormat::markdown) << '\n';
    }
    std::vector<SummaryStats> quantiles;
    for (const auto& s : input.descriptive) {
      if (s.N == cell.first && s.k == cell.second) quantiles.push_back(s);
    }
    if (!quantiles.empty()) {
      out << "Empirical distribution of the estimates:\n\n";
      render_quantile_table(out, quantiles);
      out << '\n';
    }
  }

  out << "## Ranking\n\n";
  std::map<Cell, std::vector<RankEntry>> cell_rankings;
  for (const auto& [cell, rows] : cells) {
    auto ranking = rank_estimators(rows, input.criterion);
    out << "### " << cell_label(cell.first, cell.second) << " (by " << crit
        << ")\n\n";
    for (std::size_t i = 0; i < ranking.size(); ++i) {
      out << i + 1 << ". " << to_string(ranking[i].estimator) << " ("
          << crit << ' ' << format_number(ranking[i].value) << ")\n";
    }
    out << '\n';
    cell_rankings.emplace(cell, std::move(ranking));
  }
  const auto overall = overall_ranking(input.results, input.criterion);
  if (cells.size() > 1) {
    out << "### Overall (mean rank across settings)\n\n";
    for (std::size_t i = 0; i < overall.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", overall[i].value);
      out << i + 1 << ". " << to_string(overall[i].estimator)
          << " (mean rank " << buf << ")\n";
    }
    out << '\n';
  }

  const EstimatorId winner = overall.front().estimator;
  const EstimatorInfo& info = describe(winner);
  std::size_t wins = 0;
  for (const auto& [cell, ranking] : cell_rankings) {
    if (ranking.front().estimator == winner) ++wins;
  }

  out << "## Recommendation\n\n";
  out << "Recommended estimator: **" << to_string(winner) << "** ("
      << info.display_name << ", " << info.formula << ").";
  if (cells.size() == 1) {
    out << " It has the lowest " << crit << " of the estimators compared.";
  } else {
    out << " It ranks first by " << crit << " in " << wins << " of "
        << cells.size() << " settings and has the best mean rank.";
  }
  out << " It is " << (info.unbiased ? "exactly unbiased" : "biased")
      << " for every N and k.\n\n";
  out << "Support from the tables above:\n\n";
  for (const auto& [cell, rows] : cells) {
    for (const auto& r : rows) {
      if (r.estimator != winner) continue;
      out << "- " << cell_label(cell.first, cell.second) << ": bias "
          << format_number(r.bias) << ", mse " << format_number(r.mse)
          << ", variance " << format_number(r.variance) << '\n';
    }
  }
  out << '\n';

  if (!input.plots.empty()) {
    out << "## Plots\n\n";
    for (const auto& p : input.plots) {
      out << "- [" << to_string(p.estimator) << " at "
          << cell_label(p.N, p.k) << "](" << p.path << ")\n";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace tankest
