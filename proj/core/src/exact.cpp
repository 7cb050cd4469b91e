#include "tankest/exact.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tankest/errors.hpp"
#include "tankest/estimators.hpp"

namespace tankest {
namespace {

void check_setting(std::int64_t N, std::int64_t k) {
  if (N < 1 || k < 1) {
    throw UsageError("N and k must be positive integers (got N=" +
                     std::to_string(N) + ", k=" + std::to_string(k) + ")");
  }
  if (k > N) {
    throw InfeasibleError("cannot draw k=" + std::to_string(k) +
                          " distinct labels from 1..N with N=" +
                          std::to_string(N));
  }
}

ExactMoments from_mean_variance(EstimatorId id, std::int64_t N,
                                std::int64_t k, Rational mean,
                                Rational variance) {
  ExactMoments m;
  m.estimator = id;
  m.N = N;
  m.k = k;
  m.bias = mean - Rational(N);
  m.mse = variance + m.bias * m.bias;
  m.mean = std::move(mean);
  m.variance = std::move(variance);
  return m;
}

// Midrange T = min + max - 1. For k >= 2 the joint pmf depends on (a, b)
// only through the span d = b - a, so the sum over a is done in closed form
// per span: with n = N - d pairs and c = d - 1,
//   sum_{a=1..n} (2a + c)   = n(n + d)
//   sum_{a=1..n} (2a + c)^2 = 4 n(n+1)(2n+1)/6 + 2c n(n+1) + n c^2
ExactMoments midrange_moments(std::int64_t N, std::int64_t k) {
  const BigInt subsets = binomial(N, k);
  BigInt first = 0;
  BigInt second = 0;

  if (k == 1) {
    // Single draw: min = max = x, uniform on 1..N.
    for (std::int64_t x = 1; x <= N; ++x) {
      const BigInt t = 2 * x - 1;
      first += t;
      second += t * t;
    }
  } else {
    // Weight numerator C(d-1, k-2), advanced incrementally in d.
    BigInt weight = 1;  // d = k - 1: C(k-2, k-2)
    for (std::int64_t d = k - 1; d <= N - 1; ++d) {
      if (d > k - 1) {
        weight = weight * (d - 1) / (d - k + 1);
      }
      const BigInt n = N - d;
      const BigInt c = d - 1;
      const BigInt s1 = n * (n + d);
      const BigInt s2 =
          4 * (n * (n + 1) * (2 * n + 1) / 6) + 2 * c * n * (n + 1) + n * c * c;
      first += weight * s1;
      second += weight * s2;
    }
  }

  const Rational mean(first, subsets);
  const Rational variance = Rational(second, subsets) - mean * mean;
  return from_mean_variance(EstimatorId::midrange, N, k, mean, variance);
}

}  // namespace

BigInt binomial(std::int64_t n, std::int64_t r) {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  BigInt result = 1;
  for (std::int64_t i = 1; i <= r; ++i) {
    result *= n - r + i;
    result /= i;
  }
  return result;
}

Rational pmf_max(std::int64_t N, std::int64_t k, std::int64_t m) {
  check_setting(N, k);
  if (m < k || m > N) return 0;
  return Rational(binomial(m - 1, k - 1), binomial(N, k));
}

Rational pmf_min(std::int64_t N, std::int64_t k, std::int64_t a) {
  check_setting(N, k);
  if (a < 1 || a > N - k + 1) return 0;
  return Rational(binomial(N - a, k - 1), binomial(N, k));
}

Rational pmf_minmax(std::int64_t N, std::int64_t k, std::int64_t a,
                    std::int64_t b) {
  check_setting(N, k);
  if (k < 2) {
    throw UsageError("joint min/max pmf needs k >= 2");
  }
  if (a < 1 || b > N || b - a < k - 1) return 0;
  return Rational(binomial(b - a - 1, k - 2), binomial(N, k));
}

ExactMoments exact_moments(EstimatorId id, std::int64_t N, std::int64_t k) {
  check_setting(N, k);
  const BigInt n = N;
  const BigInt kk = k;
  const BigInt spread = (n + 1) * (n - kk);  // (N+1)(N-k)
  // Var(max) = Var(min) = k(N+1)(N-k) / ((k+1)^2 (k+2))
  const Rational var_extreme(kk * spread, (kk + 1) * (kk + 1) * (kk + 2));

  switch (id) {
    case EstimatorId::mom:
      return from_mean_variance(id, N, k, Rational(n),
                                Rational(spread, 3 * kk));
    case EstimatorId::mle:
      return from_mean_variance(id, N, k, Rational(kk * (n + 1), kk + 1),
                                var_extreme);
    case EstimatorId::umvu:
      return from_mean_variance(id, N, k, Rational(n),
                                Rational(spread, kk * (kk + 2)));
    case EstimatorId::midrange:
      return midrange_moments(N, k);
    case EstimatorId::nonsense:
      return from_mean_variance(id, N, k,
                                Rational(2 * (n + 1), kk + 1) - Rational(1),
                                4 * var_extreme);
  }
  throw UsageError("unknown estimator id");
}

ExactMoments enumerate_moments(EstimatorId id, std::int64_t N,
                               std::int64_t k) {
  check_setting(N, k);
  const BigInt subsets = binomial(N, k);
  if (subsets > kEnumerationLimit) {
    throw CapacityError("C(" + std::to_string(N) + ", " + std::to_string(k) +
                        ") = " + subsets.str() + " subsets exceeds the " +
                        "enumeration limit of " +
                        std::to_string(kEnumerationLimit) +
                        "; use the closed-form exact moments instead");
  }

  // Sums of numerators and squared numerators, keyed by denominator, so the
  // inner loop stays in integer arithmetic.
  std::map<std::int64_t, std::pair<BigInt, BigInt>> sums;
  std::vector<Label> subset(static_cast<std::size_t>(k));
  for (std::int64_t i = 0; i < k; ++i) {
    subset[static_cast<std::size_t>(i)] = i + 1;
  }
  while (true) {
    const EstimateFraction f =
        estimate_fraction(id, SerialSample::from_values(subset));
    auto& [s1, s2] = sums[f.denominator];
    s1 += f.numerator;
    s2 += BigInt(f.numerator) * f.numerator;

    // Next subset in lexicographic order.
    std::int64_t pos = k - 1;
    while (pos >= 0 && subset[static_cast<std::size_t>(pos)] == N - k + pos + 1) {
      --pos;
    }
    if (pos < 0) break;
    ++subset[static_cast<std::size_t>(pos)];
    for (std::int64_t j = pos + 1; j < k; ++j) {
      subset[static_cast<std::size_t>(j)] =
          subset[static_cast<std::size_t>(j - 1)] + 1;
    }
  }

  Rational mean = 0;
  Rational second = 0;
  for (const auto& [den, s] : sums) {
    const BigInt d = den;
    mean += Rational(s.first, d * subsets);
    second += Rational(s.second, d * d * subsets);
  }
  Rational variance = second - mean * mean;
  return from_mean_variance(id, N, k, std::move(mean), std::move(variance));
}

double to_double(const Rational& r) {
  const double d = r.convert_to<double>();
  return d == 0.0 ? 0.0 : d;
}

}  // namespace tankest
