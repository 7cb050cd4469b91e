#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "run_config.hpp"
#include "tankest/errors.hpp"
#include "tankest/estimators.hpp"
#include "tankest/exact.hpp"
#include "tankest/histogram_svg.hpp"
#include "tankest/model.hpp"
#include "tankest/report.hpp"
#include "tankest/simulate.hpp"

namespace fs = std::filesystem;

namespace tankest::cli {
namespace {

std::string raw_file_name(std::int64_t N, std::int64_t k, EstimatorId id) {
  return "N" + std::to_string(N) + "_k" + std::to_string(k) + "_" +
         std::string(to_string(id)) + ".txt";
}

std::string plot_file_name(std::int64_t N, std::int64_t k, EstimatorId id) {
  return "hist_N" + std::to_string(N) + "_k" + std::to_string(k) + "_" +
         std::string(to_string(id)) + ".svg";
}

RunConfigFile load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  return parse_run_config(in);
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  out.close();
  if (!out) throw std::runtime_error("failed to write '" + path.string() + "'");
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string input;
  std::string estimators = "all";
};

int cmd_estimate(const EstimateArgs& args, std::ostream& out) {
  const auto ids = parse_estimator_list(args.estimators);
  std::ifstream in(args.input);
  if (!in) throw DataError("cannot open sample file '" + args.input + "'");
  const SerialSample sample = parse_sample_file(in);

  std::ostringstream table;
  table << std::left << std::setw(10) << "estimator" << "estimate\n";
  for (const auto& rec : estimate_all(sample, ids)) {
    table << std::left << std::setw(10) << to_string(rec.estimator)
          << format_number(rec.estimate) << '\n';
  }
  out << table.str();
  return kExitOk;
}

// ------------------------------------------------------------------- exact

struct ExactArgs {
  std::int64_t N = 0;
  std::int64_t k = 0;
  std::string estimators = "all";
  bool oracle = false;
};

int cmd_exact(const ExactArgs& args, std::ostream& out, std::ostream& err) {
  const auto ids = parse_estimator_list(args.estimators);
  if (args.N < 1 || args.k < 1) {
    throw UsageError("--N and --k must be positive integers");
  }
  if (args.k > args.N) {
    throw InfeasibleError("infeasible setting: k=" + std::to_string(args.k) +
                          " exceeds N=" + std::to_string(args.N));
  }

  std::vector<ExactMoments> rows;
  for (const auto id : ids) {
    ExactMoments closed = exact_moments(id, args.N, args.k);
    if (args.oracle) {
      ExactMoments oracle = enumerate_moments(id, args.N, args.k);
      if (!(oracle == closed)) {
        throw OracleMismatchError(
            "closed-form moments of " + std::string(to_string(id)) +
            " disagree with full enumeration at N=" + std::to_string(args.N) +
            ", k=" + std::to_string(args.k) + " (closed mean " +
            closed.mean.str() + ", variance " + closed.variance.str() +
            "; enumerated mean " + oracle.mean.str() + ", variance " +
            oracle.variance.str() + ")");
      }
      rows.push_back(std::move(oracle));
    } else {
      rows.push_back(std::move(closed));
    }
  }
  if (args.oracle) {
    err << "oracle: closed forms match enumeration of C(" << args.N << ", "
        << args.k << ") = " << binomial(args.N, args.k).str()
        << " subsets\n";
  }
  out << render_table(to_rows(rows), TableFormat::csv);
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config;
  std::string N;
  std::string k;
  std::string reps;
  std::string seed;
  std::string estimators;
  unsigned threads = 0;
  bool retain_raw = false;
  std::string out_dir;
};

SimulationConfig resolve_config(const SimulateArgs& args) {
  SimulationConfig config = SimulationConfig::defaults();
  if (!args.config.empty()) config = merge(config, load_run_config(args.config));
  if (!args.N.empty()) config.N_values = parse_positive_list(args.N, "N");
  if (!args.k.empty()) config.k_values = parse_positive_list(args.k, "k");
  if (!args.reps.empty()) config.reps = parse_positive(args.reps, "reps");
  if (!args.seed.empty()) config.seed = parse_seed(args.seed);
  if (!args.estimators.empty()) {
    config.estimators = parse_estimator_list(args.estimators);
  }
  return config;
}

// Removes the staged outputs unless release() was called.
class Staging {
 public:
  explicit Staging(std::vector<fs::path> paths) : paths_(std::move(paths)) {}
  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;
  ~Staging() {
    if (released_) return;
    std::error_code ec;
    for (const auto& p : paths_) fs::remove_all(p, ec);
  }
  void release() { released_ = true; }

 private:
  std::vector<fs::path> paths_;
  bool released_ = false;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& err) {
  const SimulationConfig config = resolve_config(args);
  validate(config, args.retain_raw);

  const unsigned threads =
      args.threads > 0 ? args.threads
                       : std::max(1u, std::thread::hardware_concurrency());
  GridOptions options;
  options.threads = threads;
  options.retain_raw = args.retain_raw;
  options.on_cell_done = [&err](std::int64_t N, std::int64_t k,
                                std::size_t done, std::size_t total) {
    err << "cell N=" << N << " k=" << k << " done (" << done << "/" << total
        << ")\n";
  };
  const GridResult grid = run_grid(config, options);

  const fs::path out_dir(args.out_dir);
  const bool created_dir = !fs::exists(out_dir);
  fs::create_directories(out_dir);
  const fs::path results_tmp = out_dir / ".results.csv.tmp";
  const fs::path raw_tmp = out_dir / ".raw.tmp";
  std::vector<fs::path> cleanup = {results_tmp, raw_tmp};
  if (created_dir) cleanup.push_back(out_dir);
  Staging staging(cleanup);

  write_file(results_tmp, render_table(to_rows(grid.rows()), TableFormat::csv));
  if (args.retain_raw) {
    fs::remove_all(raw_tmp);
    fs::create_directories(raw_tmp);
    for (const auto& cell : grid.cells) {
      for (std::size_t i = 0; i < cell.result.stats.size(); ++i) {
        std::string text;
        char buf[40];
        for (const double v : cell.result.raw[i]) {
          std::snprintf(buf, sizeof buf, "%.17g\n", v);
          text += buf;
        }
        write_file(raw_tmp / raw_file_name(cell.N, cell.k,
                                           cell.result.stats[i].estimator),
                   text);
      }
    }
    fs::remove_all(out_dir / "raw");
    fs::rename(raw_tmp, out_dir / "raw");
  }
  fs::rename(results_tmp, out_dir / "results.csv");
  staging.release();

  err << "wrote " << (out_dir / "results.csv").string() << " ("
      << grid.rows().size() << " rows)\n";
  return kExitOk;
}

// ------------------------------------------------------------------ report

struct ReportArgs {
  std::string results;
  std::string out;
  std::string plots;
  std::string criterion;
  std::string config;
  std::size_t bins = 40;
};

std::vector<double> load_raw(const fs::path& path) {
  std::ifstream in(path);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    values.push_back(std::stod(line));
  }
  return values;
}

int cmd_report(const ReportArgs& args, std::ostream& err) {
  Criterion criterion = Criterion::mse;
  if (!args.config.empty()) {
    const auto file = load_run_config(args.config);
    if (file.criterion) criterion = *file.criterion;
  }
  if (!args.criterion.empty()) criterion = parse_criterion(args.criterion);

  std::ifstream in(args.results);
  if (!in) throw DataError("cannot open results file '" + args.results + "'");
  ReportInput input;
  input.results = parse_results_csv(in);
  input.criterion = criterion;

  // Validates the (N, k) grouping up front so a bad file fails as data.
  try {
    (void)overall_ranking(input.results, criterion);
  } catch (const UsageError& e) {
    throw DataError(std::string("malformed results: ") + e.what());
  }

  std::map<std::pair<std::int64_t, std::int64_t>, bool> exact_done;
  for (const auto& row : input.results) {
    if (row.is_exact()) continue;
    if (row.k > row.N) {
      throw DataError("malformed results: k exceeds N in cell (N=" +
                      std::to_string(row.N) + ", k=" + std::to_string(row.k) +
                      ")");
    }
    input.exact.push_back(to_row(exact_moments(row.estimator, row.N, row.k)));
  }

  const fs::path raw_dir = fs::path(args.results).parent_path() / "raw";
  const fs::path report_path(args.out);
  fs::path plot_dir;
  if (!args.plots.empty()) plot_dir = args.plots;

  std::vector<std::pair<fs::path, std::string>> plot_files;
  for (const auto& row : input.results) {
    if (row.is_exact()) continue;
    const fs::path raw = raw_dir / raw_file_name(row.N, row.k, row.estimator);
    if (!fs::exists(raw)) continue;
    const std::vector<double> values = load_raw(raw);
    if (static_cast<std::int64_t>(values.size()) != *row.reps) {
      err << "warning: " << raw.string() << " has " << values.size()
          << " estimates but results list " << *row.reps
          << " reps; ignoring it\n";
      continue;
    }
    if (values.size() >= 2) {
      input.descriptive.push_back(summarize(values, row.N, row.k, row.estimator));
    }
    if (!plot_dir.empty()) {
      const PlotLabels labels{
          "Sampling distribution of " + std::string(to_string(row.estimator)) +
              " (N = " + std::to_string(row.N) +
              ", k = " + std::to_string(row.k) + ", " +
              std::to_string(*row.reps) + " replications)",
          "Estimate of N", "Number of replications"};
      const fs::path file = plot_dir / plot_file_name(row.N, row.k, row.estimator);
      plot_files.emplace_back(file,
                              render_histogram_svg(values, labels, args.bins));
      const fs::path base = report_path.has_parent_path()
                                ? report_path.parent_path()
                                : fs::path(".");
      input.plots.push_back({row.N, row.k, row.estimator,
                             fs::absolute(file).lexically_relative(
                                 fs::absolute(base)).generic_string()});
    }
  }
  if (!plot_dir.empty() && plot_files.empty()) {
    err << "warning: no raw estimates found next to " << args.results
        << " (run simulate with --retain-raw); no plots written\n";
  }

  const std::string report = render_report(input);
  if (!plot_files.empty()) fs::create_directories(plot_dir);
  for (const auto& [path, svg] : plot_files) write_file(path, svg);
  if (report_path.has_parent_path()) {
    fs::create_directories(report_path.parent_path());
  }
  write_file(report_path, report);
  err << "wrote " << report_path.string();
  if (!plot_files.empty()) err << " and " << plot_files.size() << " plots";
  err << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Estimate a population size N from serial labels, and compare "
               "estimators exactly and by simulation."};
  app.name("tankest");
  app.require_subcommand(1);

  EstimateArgs est;
  auto* estimate_cmd =
      app.add_subcommand("estimate", "Estimate N from a sample file");
  estimate_cmd->add_option("--input", est.input, "Sample file")
      ->required()
      ->check(CLI::ExistingFile);
  estimate_cmd->add_option("--estimators", est.estimators,
                           "Comma-separated ids or 'all'");

  ExactArgs ex;
  auto* exact_cmd = app.add_subcommand(
      "exact", "Exact sampling moments as results CSV on stdout");
  exact_cmd->add_option("--N", ex.N, "Population size")->required();
  exact_cmd->add_option("--k", ex.k, "Sample size")->required();
  exact_cmd->add_option("--estimators", ex.estimators,
                        "Comma-separated ids or 'all'");
  exact_cmd->add_flag("--oracle", ex.oracle,
                      "Compute by full enumeration and check the closed forms");

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "Monte Carlo comparison over an (N, k) grid");
  simulate_cmd->add_option("--config", sim.config, "Run configuration file")
      ->check(CLI::ExistingFile);
  simulate_cmd->add_option("--N", sim.N, "Comma-separated population sizes");
  simulate_cmd->add_option("--k", sim.k, "Comma-separated sample sizes");
  simulate_cmd->add_option("--reps", sim.reps, "Replications per cell");
  simulate_cmd->add_option("--seed", sim.seed, "Master seed");
  simulate_cmd->add_option("--estimators", sim.estimators,
                           "Comma-separated ids or 'all'");
  simulate_cmd->add_option("--threads", sim.threads,
                           "Worker threads (0 = hardware concurrency)");
  simulate_cmd->add_flag("--retain-raw", sim.retain_raw,
                         "Also write every estimate under <out>/raw/");
  simulate_cmd->add_option("--out", sim.out_dir, "Output directory")
      ->required();

  ReportArgs rep;
  auto* report_cmd = app.add_subcommand(
      "report", "Markdown recommendation report from a results CSV");
  report_cmd->add_option("--results", rep.results, "Results CSV")
      ->required()
      ->check(CLI::ExistingFile);
  report_cmd->add_option("--out", rep.out, "Report path")->required();
  report_cmd->add_option("--plots", rep.plots,
                         "Directory for histogram SVGs");
  report_cmd->add_option("--criterion", rep.criterion,
                         "mse (default), variance or abs_bias");
  report_cmd->add_option("--config", rep.config,
                         "Run configuration file (reads 'criterion')")
      ->check(CLI::ExistingFile);
  report_cmd->add_option("--bins", rep.bins, "Histogram bins")
      ->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  argv.push_back("tankest");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*estimate_cmd) return cmd_estimate(est, out);
    if (*exact_cmd) return cmd_exact(ex, out, err);
    if (*simulate_cmd) return cmd_simulate(sim, err);
    if (*report_cmd) return cmd_report(rep, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "invalid data: " << e.what() << '\n';
    return kExitData;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const OracleMismatchError& e) {
    err << "oracle mismatch: " << e.what() << '\n';
    return kExitOracleMismatch;
  } catch (const CapacityError& e) {
    err << "oracle capacity: " << e.what() << '\n';
    return kExitOracleCapacity;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace tankest::cli
