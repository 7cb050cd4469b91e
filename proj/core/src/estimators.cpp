#include "tankest/estimators.hpp"

#include <array>

#include "tankest/errors.hpp"

namespace tankest {
namespace {

constexpr std::array<EstimatorInfo, 5> kCatalog = {{
    {EstimatorId::mom, "method of moments", "2·mean − 1", true},
    {EstimatorId::mle, "maximum likelihood", "max", false},
    {EstimatorId::umvu, "max plus average gap", "max·(1 + 1/k) − 1",
     true},
    {EstimatorId::midrange, "midrange", "min + max − 1", true},
    {EstimatorId::nonsense, "twice the minimum", "2·min − 1", false},
}};

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw DataError("estimate overflows 64-bit arithmetic");
  }
  return out;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_sub_overflow(a, b, &out)) {
    throw DataError("estimate overflows 64-bit arithmetic");
  }
  return out;
}

}  // namespace

EstimateFraction estimate_fraction(EstimatorId id, const SerialSample& sample) {
  const std::int64_t k = sample.size();
  const Label m = sample.max();
  const Label a = sample.min();
  switch (id) {
    case EstimatorId::mom:
      return {checked_sub(checked_mul(2, sample.sum()), k), k};
    case EstimatorId::mle:
      return {m, 1};
    case EstimatorId::umvu:
      return {checked_sub(checked_mul(m, k + 1), k), k};
    case EstimatorId::midrange:
      return {a + m - 1, 1};
    case EstimatorId::nonsense:
      return {2 * a - 1, 1};
  }
  throw UsageError("unknown estimator id");
}

double estimate(EstimatorId id, const SerialSample& sample) {
  const EstimateFraction f = estimate_fraction(id, sample);
  return static_cast<double>(f.numerator) /
         static_cast<double>(f.denominator);
}

std::vector<EstimateRecord> estimate_all(const SerialSample& sample,
                                         std::span<const EstimatorId> ids) {
  std::vector<EstimateRecord> records;
  for (const EstimatorId id : canonical_order(ids)) {
    records.push_back({id, estimate(id, sample), sample.size()});
  }
  return records;
}

const EstimatorInfo& describe(EstimatorId id) noexcept {
  return kCatalog[static_cast<std::size_t>(id)];
}

}  // namespace tankest
