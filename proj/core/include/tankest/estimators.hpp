#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tankest/model.hpp"

namespace tankest {

struct EstimatorInfo {
  EstimatorId id = EstimatorId::mom;
  std::string_view display_name;
  std::string_view formula;
  /// E[estimate] = N for every feasible (N, k).
  bool unbiased = false;
};

/// An estimate as an exact fraction numerator / denominator.
///
/// Every catalog estimator is a rational with denominator 1 or k, so this
/// is lossless; the exact-moment oracle consumes it directly.
struct EstimateFraction {
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;
};

/// With m = max, a = min, s = sum, k = size:
///   mom       2*s/k - 1           = (2s - k) / k
///   mle       m
///   umvu      m + (m - k) / k     = (m(k+1) - k) / k
///   midrange  a + m - 1
///   nonsense  2a - 1
[[nodiscard]] EstimateFraction estimate_fraction(EstimatorId id,
                                                 const SerialSample& sample);

/// Point estimate of N, correctly rounded from the exact fraction.
[[nodiscard]] double estimate(EstimatorId id, const SerialSample& sample);

/// One record per id in canonical order (duplicates collapse).
[[nodiscard]] std::vector<EstimateRecord> estimate_all(
    const SerialSample& sample, std::span<const EstimatorId> ids);

[[nodiscard]] const EstimatorInfo& describe(EstimatorId id) noexcept;

}  // namespace tankest
