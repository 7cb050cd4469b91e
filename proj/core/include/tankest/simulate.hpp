#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "tankest/model.hpp"

namespace tankest {

/// Pseudo-random stream used for sampling. 19937-bit state; each simulation
/// cell gets its own stream seeded from (seed, N, k).
using RandomStream = std::mt19937_64;

/// Raw estimates can be retained only up to this many replications per cell.
inline constexpr std::int64_t kMaxRetainedReps = 1'000'000;

/// SplitMix64 finalizer over seed, N and k in turn. Stable, documented
/// substream derivation: the result seeds the cell's RandomStream.
[[nodiscard]] std::uint64_t cell_seed(std::uint64_t seed, std::int64_t N,
                                      std::int64_t k) noexcept;

/// The stream a cell draws from, ready to use.
[[nodiscard]] RandomStream make_cell_stream(std::uint64_t seed, std::int64_t N,
                                            std::int64_t k);

/// Floyd's subset sampling over 1..N with a reusable membership table, so
/// repeated draws cost O(k) each.
class SubsetSampler {
 public:
  /// Throws InfeasibleError when k > N, UsageError when N or k < 1.
  SubsetSampler(std::int64_t N, std::int64_t k);

  /// Uniform k-subset of 1..N, in Floyd insertion order.
  SerialSample draw(RandomStream& stream);

  [[nodiscard]] std::int64_t N() const noexcept { return N_; }
  [[nodiscard]] std::int64_t k() const noexcept { return k_; }

 private:
  std::int64_t N_;
  std::int64_t k_;
  std::vector<std::uint8_t> taken_;
  std::vector<Label> scratch_;
};

/// Uniformly distributed k-subset of 1..N.
[[nodiscard]] SerialSample draw_sample(std::int64_t N, std::int64_t k,
                                       RandomStream& stream);

/// Per-cell empirical descriptive statistics of one estimator.
struct SummaryStats {
  std::int64_t N = 0;
  std::int64_t k = 0;
  EstimatorId estimator = EstimatorId::mom;
  std::int64_t reps = 0;
  double mean = 0.0;
  double bias = 0.0;      // mean - N
  double variance = 0.0;  // divisor reps - 1
  double mse = 0.0;       // mean of (estimate - N)^2
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double max = 0.0;
};

/// Descriptive statistics of a set of estimates. Quantiles use linear
/// interpolation between order statistics at position p*(n-1) (Hyndman-Fan
/// type 7). Needs at least two estimates.
[[nodiscard]] SummaryStats summarize(std::span<const double> estimates,
                                     std::int64_t N, std::int64_t k,
                                     EstimatorId estimator);

struct CellRequest {
  std::int64_t N = 0;
  std::int64_t k = 0;
  std::int64_t reps = 0;
  std::vector<EstimatorId> estimators;
  std::uint64_t seed = 0;
  bool retain_raw = false;
};

struct CellResult {
  std::vector<SummaryStats> stats;          // canonical estimator order
  std::vector<std::vector<double>> raw;     // parallel to stats; empty unless retained
};

/// Draws `reps` samples from the cell's own stream and summarizes every
/// requested estimator. A pure function of the request.
[[nodiscard]] CellResult run_cell(const CellRequest& request);

struct SimulationConfig {
  std::vector<std::int64_t> N_values;
  std::vector<std::int64_t> k_values;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
  std::vector<EstimatorId> estimators;

  /// N in {100, 300, 1000}, k in {5, 15, 30}, 100000 reps, seed 42, all
  /// estimators.
  static SimulationConfig defaults();
};

/// Throws UsageError (empty lists, non-positive values, reps < 2, no
/// estimators, retained reps over the cap) or InfeasibleError naming the
/// first (N, k) pair with k > N.
void validate(const SimulationConfig& config, bool retain_raw = false);

struct GridOptions {
  unsigned threads = 1;
  bool retain_raw = false;
  /// Called once per finished cell, serialized, in completion order.
  std::function<void(std::int64_t N, std::int64_t k, std::size_t done,
                     std::size_t total)>
      on_cell_done;
};

struct GridCell {
  std::int64_t N = 0;
  std::int64_t k = 0;
  CellResult result;
};

struct GridResult {
  std::vector<GridCell> cells;  // N ascending, then k ascending

  /// All rows: N, then k, then canonical estimator order.
  [[nodiscard]] std::vector<SummaryStats> rows() const;
};

/// Validates the whole grid before any cell runs, then runs every cell.
/// Output does not depend on the thread count.
[[nodiscard]] GridResult run_grid(const SimulationConfig& config,
                                  const GridOptions& options = {});

}  // namespace tankest
