#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "tankest/model.hpp"

namespace tankest {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact sampling moments of one estimator when k labels are drawn without
/// replacement from 1..N.
struct ExactMoments {
  EstimatorId estimator = EstimatorId::mom;
  std::int64_t N = 0;
  std::int64_t k = 0;
  Rational mean;
  Rational bias;      // mean - N
  Rational variance;  // E[(T - mean)^2]
  Rational mse;       // variance + bias^2

  friend bool operator==(const ExactMoments&, const ExactMoments&) = default;
};

/// Subset count above which enumerate_moments refuses to run.
inline constexpr std::int64_t kEnumerationLimit = 1'000'000;

/// C(n, r); zero when r < 0 or r > n.
[[nodiscard]] BigInt binomial(std::int64_t n, std::int64_t r);

// Order-statistic pmfs under simple random sampling without replacement.
// All require 1 <= k <= N (k > N throws InfeasibleError, k < 1 or N < 1
// throws UsageError) and return 0 outside the support.

/// P(max = m) = C(m-1, k-1) / C(N, k).
[[nodiscard]] Rational pmf_max(std::int64_t N, std::int64_t k, std::int64_t m);

/// P(min = a) = C(N-a, k-1) / C(N, k).
[[nodiscard]] Rational pmf_min(std::int64_t N, std::int64_t k, std::int64_t a);

/// P(min = a, max = b) = C(b-a-1, k-2) / C(N, k). Needs k >= 2; a single
/// draw has min = max, which this joint form does not describe.
[[nodiscard]] Rational pmf_minmax(std::int64_t N, std::int64_t k,
                                  std::int64_t a, std::int64_t b);

/// Closed-form moments (midrange sums its joint min/max pmf).
[[nodiscard]] ExactMoments exact_moments(EstimatorId id, std::int64_t N,
                                         std::int64_t k);

/// Brute-force oracle: visits every k-subset of 1..N with weight 1/C(N, k)
/// and applies the estimator catalog in exact arithmetic. Throws
/// CapacityError when C(N, k) exceeds kEnumerationLimit.
[[nodiscard]] ExactMoments enumerate_moments(EstimatorId id, std::int64_t N,
                                             std::int64_t k);

/// Nearest double, with negative zero normalized to +0.
[[nodiscard]] double to_double(const Rational& r);

}  // namespace tankest
