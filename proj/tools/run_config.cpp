#include "run_config.hpp"

#include <charconv>
#include <istream>
#include <string>

#include "tankest/errors.hpp"

namespace tankest::cli {
namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_int(std::string_view text, T& out) {
  if (text.empty()) return false;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

std::int64_t parse_positive(std::string_view text, std::string_view key) {
  std::int64_t v = 0;
  text = trim(text);
  if (!parse_int(text, v) || v < 1) {
    throw UsageError(std::string(key) + ": '" + std::string(text) +
                     "' is not a positive integer");
  }
  return v;
}

std::vector<std::int64_t> parse_positive_list(std::string_view text,
                                              std::string_view key) {
  std::vector<std::int64_t> values;
  while (true) {
    const auto comma = text.find(',');
    values.push_back(parse_positive(text.substr(0, comma), key));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return values;
}

std::uint64_t parse_seed(std::string_view text) {
  std::uint64_t v = 0;
  text = trim(text);
  if (!parse_int(text, v)) {
    throw UsageError("seed: '" + std::string(text) +
                     "' is not an unsigned 64-bit integer");
  }
  return v;
}

RunConfigFile parse_run_config(std::istream& in) {
  RunConfigFile cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;

    const std::string where = "config line " + std::to_string(line_no) + ": ";
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(where + "expected 'key = value'");
    }
    const std::string key(trim(body.substr(0, eq)));
    const std::string_view value = trim(body.substr(eq + 1));
    if (value.empty()) throw UsageError(where + key + ": missing value");

    const auto set_once = [&](auto& slot, auto&& parsed) {
      if (slot) throw UsageError(where + key + ": key repeated");
      slot = std::forward<decltype(parsed)>(parsed);
    };
    try {
      if (key == "N") {
        set_once(cfg.N, parse_positive_list(value, "N"));
      } else if (key == "k") {
        set_once(cfg.k, parse_positive_list(value, "k"));
      } else if (key == "reps") {
        set_once(cfg.reps, parse_positive(value, "reps"));
      } else if (key == "seed") {
        set_once(cfg.seed, parse_seed(value));
      } else if (key == "estimators") {
        set_once(cfg.estimators, parse_estimator_list(value));
      } else if (key == "criterion") {
        set_once(cfg.criterion, parse_criterion(value));
      } else {
        throw UsageError("unknown key '" + key + "'");
      }
    } catch (const UsageError& e) {
      const std::string_view msg = e.what();
      if (msg.starts_with("config line")) throw;
      throw UsageError(where + std::string(msg));
    }
  }
  return cfg;
}

SimulationConfig merge(SimulationConfig base, const RunConfigFile& file) {
  if (file.N) base.N_values = *file.N;
  if (file.k) base.k_values = *file.k;
  if (file.reps) base.reps = *file.reps;
  if (file.seed) base.seed = *file.seed;
  if (file.estimators) base.estimators = *file.estimators;
  return base;
}

}  // namespace tankest::cli
