#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "tankest/model.hpp"
#include "tankest/report.hpp"
#include "tankest/simulate.hpp"

namespace tankest::cli {

/// Contents of a `key = value` run configuration file. Keys that were not
/// present stay empty so they can be layered: flags > file > defaults.
struct RunConfigFile {
  std::optional<std::vector<std::int64_t>> N;
  std::optional<std::vector<std::int64_t>> k;
  std::optional<std::int64_t> reps;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<EstimatorId>> estimators;
  std::optional<Criterion> criterion;
};

/// Throws UsageError naming the line and key for unknown or repeated keys,
/// missing `=`, and values that do not parse.
RunConfigFile parse_run_config(std::istream& in);

/// Comma-separated positive integers. `key` names the setting in errors.
std::vector<std::int64_t> parse_positive_list(std::string_view text,
                                              std::string_view key);
std::int64_t parse_positive(std::string_view text, std::string_view key);
std::uint64_t parse_seed(std::string_view text);

/// Applies the file values that are set on top of `base`.
SimulationConfig merge(SimulationConfig base, const RunConfigFile& file);

}  // namespace tankest::cli
