#include "tankest/model.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <sstream>
#include <unordered_map>

#include "tankest/errors.hpp"

namespace tankest {
namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\v\f";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

}  // namespace

SerialSample SerialSample::from_values(std::vector<Label> values) {
  if (values.empty()) throw DataError("empty sample");

  SerialSample sample;
  sample.min_ = values.front();
  sample.max_ = values.front();
  for (const Label v : values) {
    if (v < 1) {
      throw DataError("serial label " + std::to_string(v) +
                      " is not a positive integer");
    }
    sample.min_ = std::min(sample.min_, v);
    sample.max_ = std::max(sample.max_, v);
    if (__builtin_add_overflow(sample.sum_, v, &sample.sum_)) {
      throw DataError("sum of serial labels overflows 64 bits");
    }
  }

  std::vector<Label> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const auto dup = std::adjacent_find(sorted.begin(), sorted.end());
  if (dup != sorted.end()) {
    throw DataError("duplicate serial label " + std::to_string(*dup));
  }

  sample.values_ = std::move(values);
  return sample;
}

SerialSample parse_sample_file(std::istream& in) {
  std::vector<Label> values;
  std::unordered_map<Label, std::size_t> line_of;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;

    Label v = 0;
    const auto [ptr, ec] =
        std::from_chars(body.data(), body.data() + body.size(), v);
    if (ec == std::errc::result_out_of_range) {
      throw DataError("line " + std::to_string(line_no) + ": value '" +
                      std::string(body) + "' is out of range");
    }
    if (ec != std::errc() || ptr != body.data() + body.size() || v < 1) {
      throw DataError("line " + std::to_string(line_no) + ": '" +
                      std::string(body) +
                      "' is not a base-10 positive integer");
    }
    const auto [seen, inserted] = line_of.emplace(v, line_no);
    if (!inserted) {
      throw DataError("line " + std::to_string(line_no) +
                      ": duplicate serial label " + std::to_string(v) +
                      " (first seen on line " + std::to_string(seen->second) +
                      ")");
    }
    values.push_back(v);
  }
  return SerialSample::from_values(std::move(values));
}

SerialSample parse_sample_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_sample_file(in);
}

std::string render_sample(const SerialSample& sample) {
  std::string out;
  for (const Label v : sample.values()) {
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

bool validate_feasible(const SerialSample& sample,
                       const PopulationConfig& pop) noexcept {
  return sample.max() <= pop.N && sample.size() <= pop.N;
}

std::string_view to_string(EstimatorId id) noexcept {
  switch (id) {
    case EstimatorId::mom:
      return "mom";
    case EstimatorId::mle:
      return "mle";
    case EstimatorId::umvu:
      return "umvu";
    case EstimatorId::midrange:
      return "midrange";
    case EstimatorId::nonsense:
      return "nonsense";
  }
  return "unknown";
}

EstimatorId parse_estimator_id(std::string_view name) {
  for (const EstimatorId id : kAllEstimators) {
    if (to_string(id) == name) return id;
  }
  throw UsageError("unknown estimator '" + std::string(name) +
                   "' (expected one of mom, mle, umvu, midrange, nonsense)");
}

std::vector<EstimatorId> parse_estimator_list(std::string_view text) {
  text = trim(text);
  if (text == "all") return {kAllEstimators.begin(), kAllEstimators.end()};

  std::vector<EstimatorId> ids;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    if (item.empty()) throw UsageError("empty entry in estimator list");
    ids.push_back(parse_estimator_id(item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (trim(text).empty()) throw UsageError("empty entry in estimator list");
  }
  if (ids.empty()) throw UsageError("estimator list is empty");
  return canonical_order(ids);
}

std::vector<EstimatorId> canonical_order(std::span<const EstimatorId> ids) {
  std::vector<EstimatorId> out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace tankest
