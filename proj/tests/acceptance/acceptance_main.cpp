// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cli.hpp"
#include "tankest/estimators.hpp"
#include "tankest/exact.hpp"
#include "tankest/report.hpp"
#include "tankest/simulate.hpp"

namespace fs = std::filesystem;
using namespace tankest;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const fs::path kFixtures = TANKEST_FIXTURE_DIR;
constexpr std::int64_t kPaperN = 300;
constexpr std::int64_t kPaperK = 15;
constexpr std::int64_t kCalibrationReps = 200'000;
constexpr std::uint64_t kCalibrationSeed = 42;

// Shared by criteria 4 and 9.
const CellResult& paper_cell_run() {
  static const CellResult result = run_cell(
      {kPaperN, kPaperK, kCalibrationReps,
       std::vector<EstimatorId>(kAllEstimators.begin(), kAllEstimators.end()),
       kCalibrationSeed, false});
  return result;
}

Check criterion_oracle_equivalence() {
  Check c;
  int compared = 0;
  for (int N = 1; N <= 12; ++N) {
    for (int k = 1; k <= N; ++k) {
      for (const auto id : kAllEstimators) {
        const bool equal = exact_moments(id, N, k) == enumerate_moments(id, N, k);
        c.require(equal, std::string(to_string(id)) + " differs at N=" +
                             std::to_string(N) + " k=" + std::to_string(k));
        ++compared;
      }
    }
  }
  c.detail = c.ok ? std::to_string(compared) + " (estimator, N, k) triples equal"
                  : c.detail;
  return c;
}

Check criterion_unbiasedness() {
  Check c;
  for (int N = 1; N <= 12; ++N) {
    for (int k = 1; k <= N; ++k) {
      for (const auto id : {EstimatorId::mom, EstimatorId::umvu, EstimatorId::midrange}) {
        c.require(exact_moments(id, N, k).bias == 0,
                  std::string(to_string(id)) + " biased at N=" + std::to_string(N) +
                      " k=" + std::to_string(k));
      }
      c.require(exact_moments(EstimatorId::mle, N, k).bias == Rational(k - N, k + 1),
                "mle bias formula fails at N=" + std::to_string(N));
    }
  }
  const auto paper = exact_moments(EstimatorId::mle, kPaperN, kPaperK);
  c.require(paper.bias == Rational(kPaperK - kPaperN, kPaperK + 1),
            "mle bias at (300, 15) is not (k-N)/(k+1)");
  c.require(to_double(paper.bias) == -17.8125, "mle bias at (300, 15) != -17.8125");
  if (c.ok) c.detail = "mle bias at (300, 15) = " + fmt(to_double(paper.bias));
  return c;
}

Check criterion_variance_ordering() {
  Check c;
  for (int N = 2; N <= 12; ++N) {
    for (int k = 2; k <= N; ++k) {
      const auto u = exact_moments(EstimatorId::umvu, N, k).variance;
      const auto m = exact_moments(EstimatorId::midrange, N, k).variance;
      const auto o = exact_moments(EstimatorId::mom, N, k).variance;
      const std::string at = " at N=" + std::to_string(N) + " k=" + std::to_string(k);
      c.require(u <= m, "Var(umvu) > Var(midrange)" + at);
      c.require(m <= o, "Var(midrange) > Var(mom)" + at);
      if (k == 2) c.require(m == o, "Var(midrange) != Var(mom) at k = 2" + at);
    }
  }
  if (c.ok) c.detail = "umvu <= midrange <= mom for 2 <= k <= N <= 12";
  return c;
}

Check criterion_calibration() {
  Check c;
  const auto& run = paper_cell_run();
  double worst_z = 0.0;
  double worst_ratio = 0.0;
  for (const auto& s : run.stats) {
    const auto exact = exact_moments(s.estimator, kPaperN, kPaperK);
    const double var = to_double(exact.variance);
    const double tol = 4.0 * std::sqrt(var / kCalibrationReps);
    const double err = std::abs(s.mean - to_double(exact.mean));
    const double ratio = std::abs(s.variance / var - 1.0);
    worst_z = std::max(worst_z, err / std::sqrt(var / kCalibrationReps));
    worst_ratio = std::max(worst_ratio, ratio);
    c.require(err <= tol, std::string(to_string(s.estimator)) + " mean off by " +
                              fmt(err) + " > " + fmt(tol));
    c.require(ratio <= 0.05, std::string(to_string(s.estimator)) +
                                 " variance ratio off by " + fmt(ratio));
  }
  if (c.ok) {
    c.detail = "max |z| of mean " + fmt(worst_z) + " (limit 4), max |var ratio - 1| " +
               fmt(worst_ratio) + " (limit 0.05)";
  }
  return c;
}

Check criterion_uniformity() {
  Check c;
  constexpr int kDraws = 200'000;
  RandomStream stream = make_cell_stream(kCalibrationSeed, 5, 2);
  std::map<std::pair<Label, Label>, int> counts;
  for (int i = 0; i < kDraws; ++i) {
    const auto s = draw_sample(5, 2, stream);
    counts[{s.min(), s.max()}]++;
  }
  c.require(counts.size() == 10, "expected all 10 subsets to appear");
  double chi2 = 0.0;
  double worst = 0.0;
  for (const auto& [pair, n] : counts) {
    const double freq = n / static_cast<double>(kDraws);
    worst = std::max(worst, std::abs(freq - 0.1));
    chi2 += (n - kDraws / 10.0) * (n - kDraws / 10.0) / (kDraws / 10.0);
  }
  c.require(worst <= 0.006, "subset frequency off by " + fmt(worst));
  c.require(chi2 < 33.0, "chi-square " + fmt(chi2) + " >= 33");
  if (c.ok) {
    c.detail = "max |freq - 0.1| " + fmt(worst) + ", chi-square " + fmt(chi2);
  }
  return c;
}

Check criterion_determinism(const fs::path& work) {
  Check c;
  const auto sim = [&](const std::string& name, const std::string& threads) {
    return run_cli({"simulate", "--threads", threads, "--out", (work / name).string()});
  };
  const auto a = sim("det_a", "1");
  const auto b = sim("det_b", "1");
  const auto t = sim("det_t", "4");
  c.require(a.code == 0 && b.code == 0 && t.code == 0, "simulate failed: " + a.err);
  const auto ra = slurp(work / "det_a" / "results.csv");
  c.require(!ra.empty(), "results.csv missing");
  c.require(ra == slurp(work / "det_b" / "results.csv"), "repeat run differs");
  c.require(ra == slurp(work / "det_t" / "results.csv"), "4-thread run differs");
  if (c.ok) c.detail = "default grid, two 1-thread runs and a 4-thread run identical";
  return c;
}

Check criterion_end_to_end() {
  Check c;
  const auto est = run_cli({"estimate", "--input", (kFixtures / "sample_2_7_4.txt").string()});
  c.require(est.code == 0, "estimate exit " + std::to_string(est.code));
  std::map<std::string, std::string> printed;
  std::istringstream in(est.out);
  std::string name, value;
  in >> name >> value;  // header
  while (in >> name >> value) printed[name] = value;
  const std::map<std::string, std::string> expected = {
      {"mom", "7.66667"}, {"mle", "7"}, {"umvu", "8.33333"},
      {"midrange", "8"},  {"nonsense", "3"}};
  c.require(printed == expected, "estimate printed:\n" + est.out);

  const auto exact = run_cli({"exact", "--N", "5", "--k", "2", "--oracle"});
  c.require(exact.code == 0, "exact --oracle exit " + std::to_string(exact.code));
  c.require(exact.out.find("\n5,2,umvu,exact,5,0,2.25,2.25\n") != std::string::npos,
            "missing row 5,2,umvu,exact,5,0,2.25,2.25");
  if (c.ok) c.detail = "estimate table and exact --oracle row as expected";
  return c;
}

Check criterion_report_contracts(const fs::path& work) {
  Check c;
  const fs::path out = work / "report_run";
  const auto sim = run_cli({"simulate", "--N", "300,100", "--k", "15,5", "--reps", "20000",
                            "--seed", "5", "--retain-raw", "--out", out.string()});
  c.require(sim.code == 0, "simulate failed: " + sim.err);
  const std::string csv = slurp(out / "results.csv");
  c.require(csv.rfind("N,k,estimator,reps,mean,bias,variance,mse\n", 0) == 0,
            "results header mismatch");

  for (const std::string crit : {"mse", "variance", "abs_bias"}) {
    const auto rep = run_cli({"report", "--results", (out / "results.csv").string(),
                              "--out", (out / ("report_" + crit + ".md")).string(),
                              "--plots", (out / "plots").string(), "--criterion", crit});
    c.require(rep.code == 0, "report failed: " + rep.err);
    std::istringstream rows_in(csv);
    const auto rows = parse_results_csv(rows_in);
    const auto leader = overall_ranking(rows, parse_criterion(crit)).front().estimator;
    const std::string report = slurp(out / ("report_" + crit + ".md"));
    const auto rec = report.find("## Recommendation");
    c.require(rec != std::string::npos, "no recommendation section");
    c.require(report.find("**" + std::string(to_string(leader)) + "**", rec) !=
                  std::string::npos,
              "recommendation does not name " + std::string(to_string(leader)) +
                  " by " + crit);
  }

  int svgs = 0;
  const std::regex title(R"(<text class="title"[^>]*>[^<]*\S[^<]*</text>)");
  const std::regex xlab(R"(<text class="x-label"[^>]*>[^<]*\S[^<]*</text>)");
  const std::regex ylab(R"(<text class="y-label"[^>]*>[^<]*\S[^<]*</text>)");
  for (const auto& entry : fs::directory_iterator(out / "plots")) {
    ++svgs;
    const std::string svg = slurp(entry.path());
    const std::string file = entry.path().filename().string();
    c.require(std::regex_search(svg, title), file + " lacks a title");
    c.require(std::regex_search(svg, xlab), file + " lacks an x-axis label");
    c.require(std::regex_search(svg, ylab), file + " lacks a y-axis label");
  }
  c.require(svgs == 20, "expected 20 SVGs, found " + std::to_string(svgs));
  if (c.ok) c.detail = "3 criteria checked, " + std::to_string(svgs) + " labeled SVGs";
  return c;
}

Check criterion_ranking_consistency() {
  Check c;
  const auto& run = paper_cell_run();
  const auto simulated = rank_estimators(to_rows(run.stats), Criterion::mse);
  std::vector<ExactMoments> exact;
  for (const auto id : kAllEstimators) exact.push_back(exact_moments(id, kPaperN, kPaperK));
  const auto expected = rank_estimators(to_rows(exact), Criterion::mse);
  std::string sim_order, exact_order;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    sim_order += std::string(i ? " < " : "") + std::string(to_string(simulated[i].estimator));
    exact_order += std::string(i ? " < " : "") + std::string(to_string(expected[i].estimator));
  }
  c.require(sim_order == exact_order, "simulated " + sim_order + " vs exact " + exact_order);
  if (c.ok) c.detail = exact_order;
  return c;
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() /
                        ("tankest_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(work);
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"1 oracle equivalence (N <= 12)", criterion_oracle_equivalence},
      {"2 unbiasedness and mle bias", criterion_unbiasedness},
      {"3 variance ordering", criterion_variance_ordering},
      {"4 simulation calibration at (300, 15)", criterion_calibration},
      {"5 sampling uniformity (5, 2)", criterion_uniformity},
      {"6 simulate determinism", [&] { return criterion_determinism(work); }},
      {"7 end-to-end estimate/exact", criterion_end_to_end},
      {"8 report contracts", [&] { return criterion_report_contracts(work); }},
      {"9 ranking consistency at (300, 15)", criterion_ranking_consistency},
  };

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Check result;
    try {
      result = check();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %s: %s (%.2fs)\n", result.ok ? "PASS" : "FAIL",
                name.c_str(), result.detail.c_str(), secs);
    failures += !result.ok;
  }
  fs::remove_all(work);
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
