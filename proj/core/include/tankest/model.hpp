#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tankest {

/// Serial label. Labels run 1..N.
using Label = std::int64_t;

/// An observed set of k distinct positive serial labels, in observation order.
///
/// Construction validates the invariants (every label >= 1, pairwise
/// distinct, k >= 1), so any SerialSample in hand is well formed and
/// max() >= size() holds automatically.
class SerialSample {
 public:
  /// Throws DataError naming the offending value when an invariant fails.
  static SerialSample from_values(std::vector<Label> values);

  [[nodiscard]] std::span<const Label> values() const noexcept {
    return values_;
  }
  [[nodiscard]] std::int64_t size() const noexcept {
    return static_cast<std::int64_t>(values_.size());
  }
  [[nodiscard]] Label min() const noexcept { return min_; }
  [[nodiscard]] Label max() const noexcept { return max_; }
  [[nodiscard]] std::int64_t sum() const noexcept { return sum_; }

  friend bool operator==(const SerialSample&, const SerialSample&) = default;

 private:
  SerialSample() = default;

  std::vector<Label> values_;
  Label min_ = 0;
  Label max_ = 0;
  std::int64_t sum_ = 0;
};

struct PopulationConfig {
  std::int64_t N = 1;
};

/// Parses the sample file format: one base-10 positive integer per line,
/// blank lines and `#` comment lines ignored, LF or CRLF line endings.
/// Errors are DataError and carry the 1-based line number.
SerialSample parse_sample_file(std::istream& in);
SerialSample parse_sample_text(std::string_view text);

/// Renders a sample in the file format (one label per line).
std::string render_sample(const SerialSample& sample);

/// True iff the sample could have been drawn from 1..N.
[[nodiscard]] bool validate_feasible(const SerialSample& sample,
                                     const PopulationConfig& pop) noexcept;

enum class EstimatorId : std::uint8_t { mom, mle, umvu, midrange, nonsense };

/// Canonical order; every ordered output follows it.
inline constexpr std::array<EstimatorId, 5> kAllEstimators = {
    EstimatorId::mom, EstimatorId::mle, EstimatorId::umvu,
    EstimatorId::midrange, EstimatorId::nonsense};

[[nodiscard]] std::string_view to_string(EstimatorId id) noexcept;

/// Accepts the lowercase canonical names. Throws UsageError otherwise.
[[nodiscard]] EstimatorId parse_estimator_id(std::string_view name);

/// Parses "all" or a comma-separated list of names into canonical order,
/// dropping duplicates. Throws UsageError on unknown names or an empty list.
[[nodiscard]] std::vector<EstimatorId> parse_estimator_list(
    std::string_view text);

/// Sorts into canonical order and drops duplicates.
[[nodiscard]] std::vector<EstimatorId> canonical_order(
    std::span<const EstimatorId> ids);

struct EstimateRecord {
  EstimatorId estimator = EstimatorId::mom;
  double estimate = 0.0;
  std::int64_t k = 0;
};

}  // namespace tankest
