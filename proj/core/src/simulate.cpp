#include "tankest/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "tankest/errors.hpp"
#include "tankest/estimators.hpp"

namespace tankest {
namespace {

constexpr std::int64_t kMembershipTableLimit = std::int64_t{1} << 24;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_setting(std::int64_t N, std::int64_t k) {
  if (N < 1 || k < 1) {
    throw UsageError("N and k must be positive integers (got N=" +
                     std::to_string(N) + ", k=" + std::to_string(k) + ")");
  }
  if (k > N) {
    throw InfeasibleError("infeasible cell (N=" + std::to_string(N) +
                          ", k=" + std::to_string(k) + "): k exceeds N");
  }
}

double quantile_sorted(std::span<const double> sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<std::int64_t> sorted_unique(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void check_positive_list(const std::vector<std::int64_t>& values,
                         const char* key) {
  if (values.empty()) {
    throw UsageError(std::string(key) + ": list must not be empty");
  }
  for (const auto v : values) {
    if (v < 1) {
      throw UsageError(std::string(key) + ": value " + std::to_string(v) +
                       " is not a positive integer");
    }
  }
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t seed, std::int64_t N,
                        std::int64_t k) noexcept {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(N));
  return splitmix64(h ^ static_cast<std::uint64_t>(k));
}

RandomStream make_cell_stream(std::uint64_t seed, std::int64_t N,
                              std::int64_t k) {
  const std::uint64_t s = cell_seed(seed, N, k);
  std::seed_seq seq{static_cast<std::uint32_t>(s),
                    static_cast<std::uint32_t>(s >> 32)};
  return RandomStream(seq);
}

SubsetSampler::SubsetSampler(std::int64_t N, std::int64_t k) : N_(N), k_(k) {
  check_setting(N, k);
  if (N <= kMembershipTableLimit) {
    taken_.assign(static_cast<std::size_t>(N) + 1, 0);
  }
  scratch_.reserve(static_cast<std::size_t>(k));
}

SerialSample SubsetSampler::draw(RandomStream& stream) {
  scratch_.clear();
  const auto is_taken = [this](Label v) {
    if (!taken_.empty()) return taken_[static_cast<std::size_t>(v)] != 0;
    return std::find(scratch_.begin(), scratch_.end(), v) != scratch_.end();
  };
  // Floyd: for j = N-k+1..N pick t in 1..j; take t unless already taken,
  // in which case take j (which cannot be taken yet).
  for (std::int64_t j = N_ - k_ + 1; j <= N_; ++j) {
    std::uniform_int_distribution<std::int64_t> pick(1, j);
    const Label t = pick(stream);
    const Label chosen = is_taken(t) ? j : t;
    if (!taken_.empty()) taken_[static_cast<std::size_t>(chosen)] = 1;
    scratch_.push_back(chosen);
  }
  if (!taken_.empty()) {
    for (const Label v : scratch_) taken_[static_cast<std::size_t>(v)] = 0;
  }
  return SerialSample::from_values(scratch_);
}

SerialSample draw_sample(std::int64_t N, std::int64_t k,
                         RandomStream& stream) {
  SubsetSampler sampler(N, k);
  return sampler.draw(stream);
}

SummaryStats summarize(std::span<const double> estimates, std::int64_t N,
                       std::int64_t k, EstimatorId estimator) {
  if (estimates.size() < 2) {
    throw UsageError("summary statistics need at least two estimates");
  }
  const auto n = static_cast<double>(estimates.size());
  const double truth = static_cast<double>(N);

  SummaryStats s;
  s.N = N;
  s.k = k;
  s.estimator = estimator;
  s.reps = static_cast<std::int64_t>(estimates.size());
  s.mean = std::accumulate(estimates.begin(), estimates.end(), 0.0) / n;
  s.bias = s.mean - truth;

  double ss = 0.0;
  double sq_err = 0.0;
  for (const double x : estimates) {
    ss += (x - s.mean) * (x - s.mean);
    sq_err += (x - truth) * (x - truth);
  }
  s.variance = ss / (n - 1.0);
  s.mse = sq_err / n;

  std::vector<double> sorted(estimates.begin(), estimates.end());
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.q25 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q75 = quantile_sorted(sorted, 0.75);
  s.max = sorted.back();
  return s;
}

CellResult run_cell(const CellRequest& request) {
  check_setting(request.N, request.k);
  if (request.reps < 2) {
    throw UsageError("reps must be at least 2 (got " +
                     std::to_string(request.reps) + ")");
  }
  if (request.estimators.empty()) {
    throw UsageError("no estimators requested");
  }
  if (request.retain_raw && request.reps > kMaxRetainedReps) {
    throw UsageError("raw estimates can be retained for at most " +
                     std::to_string(kMaxRetainedReps) + " reps per cell");
  }

  const std::vector<EstimatorId> ids = canonical_order(request.estimators);
  std::vector<std::vector<double>> estimates(ids.size());
  for (auto& e : estimates) e.reserve(static_cast<std::size_t>(request.reps));

  SubsetSampler sampler(request.N, request.k);
  RandomStream stream = make_cell_stream(request.seed, request.N, request.k);
  for (std::int64_t rep = 0; rep < request.reps; ++rep) {
    const SerialSample sample = sampler.draw(stream);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      estimates[i].push_back(estimate(ids[i], sample));
    }
  }

  CellResult result;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    result.stats.push_back(
        summarize(estimates[i], request.N, request.k, ids[i]));
  }
  if (request.retain_raw) result.raw = std::move(estimates);
  return result;
}

SimulationConfig SimulationConfig::defaults() {
  SimulationConfig c;
  c.N_values = {100, 300, 1000};
  c.k_values = {5, 15, 30};
  c.reps = 100'000;
  c.seed = 42;
  c.estimators.assign(kAllEstimators.begin(), kAllEstimators.end());
  return c;
}

void validate(const SimulationConfig& config, bool retain_raw) {
  check_positive_list(config.N_values, "N");
  check_positive_list(config.k_values, "k");
  if (config.reps < 2) {
    throw UsageError("reps: must be at least 2 (got " +
                     std::to_string(config.reps) + ")");
  }
  if (config.estimators.empty()) {
    throw UsageError("estimators: list must not be empty");
  }
  if (retain_raw && config.reps > kMaxRetainedReps) {
    throw UsageError("reps: raw estimates can be retained for at most " +
                     std::to_string(kMaxRetainedReps) + " reps per cell");
  }
  for (const auto N : sorted_unique(config.N_values)) {
    for (const auto k : sorted_unique(config.k_values)) {
      if (k > N) {
        throw InfeasibleError("infeasible cell (N=" + std::to_string(N) +
                              ", k=" + std::to_string(k) + "): k exceeds N");
      }
    }
  }
}

std::vector<SummaryStats> GridResult::rows() const {
  std::vector<SummaryStats> out;
  for (const auto& cell : cells) {
    out.insert(out.end(), cell.result.stats.begin(), cell.result.stats.end());
  }
  return out;
}

GridResult run_grid(const SimulationConfig& config,
                    const GridOptions& options) {
  validate(config, options.retain_raw);

  GridResult grid;
  for (const auto N : sorted_unique(config.N_values)) {
    for (const auto k : sorted_unique(config.k_values)) {
      grid.cells.push_back({N, k, {}});
    }
  }

  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex mu;
  std::exception_ptr failure;

  const auto worker = [&] {
    for (std::size_t i = next++; i < grid.cells.size(); i = next++) {
      GridCell& cell = grid.cells[i];
      try {
        cell.result = run_cell({cell.N, cell.k, config.reps, config.estimators,
                                config.seed, options.retain_raw});
      } catch (...) {
        const std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = grid.cells.size();
        return;
      }
      const std::lock_guard lock(mu);
      ++done;
      if (options.on_cell_done) {
        options.on_cell_done(cell.N, cell.k, done, grid.cells.size());
      }
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(options.threads, 1, grid.cells.size());
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return grid;
}

}  // namespace tankest
