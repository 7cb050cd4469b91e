#include <gtest/gtest.h>

#include <sstream>

#include "run_config.hpp"
#include "tankest/errors.hpp"

namespace tankest::cli {
namespace {

RunConfigFile parse(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in);
}

std::string usage_message(const std::string& text) {
  try {
    (void)parse(text);
  } catch (const UsageError& e) {
    return e.what();
  }
  return {};
}

TEST(RunConfig, ParsesEveryKey) {
  const auto cfg = parse(
      "# grid\n"
      "N = 100, 300\n"
      "k = 5,15\n"
      "\n"
      "reps = 2000\n"
      "seed = 18446744073709551615\n"
      "estimators = umvu, mle\n"
      "criterion = variance\n");
  EXPECT_EQ(*cfg.N, (std::vector<std::int64_t>{100, 300}));
  EXPECT_EQ(*cfg.k, (std::vector<std::int64_t>{5, 15}));
  EXPECT_EQ(*cfg.reps, 2000);
  EXPECT_EQ(*cfg.seed, 18446744073709551615ULL);
  EXPECT_EQ(*cfg.estimators,
            (std::vector<EstimatorId>{EstimatorId::mle, EstimatorId::umvu}));
  EXPECT_EQ(*cfg.criterion, Criterion::variance);
}

TEST(RunConfig, MissingKeysStayUnset) {
  const auto cfg = parse("reps = 10\n");
  EXPECT_FALSE(cfg.N);
  EXPECT_FALSE(cfg.seed);
  EXPECT_TRUE(cfg.reps);
}

TEST(RunConfig, ErrorsNameTheKey) {
  EXPECT_NE(usage_message("k = 0\n").find("k:"), std::string::npos);
  EXPECT_NE(usage_message("N = 10, -3\n").find("N:"), std::string::npos);
  EXPECT_NE(usage_message("colour = red\n").find("colour"), std::string::npos);
  EXPECT_NE(usage_message("reps = 5\nreps = 6\n").find("repeated"),
            std::string::npos);
  EXPECT_NE(usage_message("reps 5\n").find("line 1"), std::string::npos);
  EXPECT_NE(usage_message("seed =\n").find("seed"), std::string::npos);
  EXPECT_NE(usage_message("criterion = best\n").find("criterion"),
            std::string::npos);
  EXPECT_NE(usage_message("# c\nestimators = mom, bayes\n").find("line 2"),
            std::string::npos);
}

TEST(RunConfig, MergeOverridesOnlySetKeys) {
  const auto base = SimulationConfig::defaults();
  const auto merged = merge(base, parse("k = 7\nseed = 3\n"));
  EXPECT_EQ(merged.N_values, base.N_values);
  EXPECT_EQ(merged.k_values, (std::vector<std::int64_t>{7}));
  EXPECT_EQ(merged.seed, 3u);
  EXPECT_EQ(merged.reps, base.reps);
}

TEST(RunConfig, ListParsing) {
  EXPECT_EQ(parse_positive_list("1,2, 3", "N"),
            (std::vector<std::int64_t>{1, 2, 3}));
  EXPECT_THROW((void)parse_positive_list("1,,2", "N"), UsageError);
  EXPECT_THROW((void)parse_positive_list("", "N"), UsageError);
  EXPECT_THROW((void)parse_seed("-1"), UsageError);
}

}  // namespace
}  // namespace tankest::cli
