#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tankest {

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;

  [[nodiscard]] double bin_width() const {
    return (hi - lo) / static_cast<double>(counts.size());
  }
};

/// Equal-width bins over [min, max]; the last bin is closed on the right.
/// When every value is equal the range widens to [v - 0.5, v + 0.5].
[[nodiscard]] Histogram make_histogram(std::span<const double> values,
                                       std::size_t bins);

struct PlotLabels {
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// Standalone SVG 1.1 histogram with a visible title and both axis labels.
/// Throws UsageError on empty data, zero bins or a blank label.
[[nodiscard]] std::string render_histogram_svg(std::span<const double> values,
                                               const PlotLabels& labels,
                                               std::size_t bins);

}  // namespace tankest
