#include "tankest/histogram_svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string_view>

#include "tankest/errors.hpp"
#include "tankest/report.hpp"

namespace tankest {
namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 80;
constexpr double kRight = 24;
constexpr double kTop = 56;
constexpr double kBottom = 72;

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace

Histogram make_histogram(std::span<const double> values, std::size_t bins) {
  if (values.empty()) throw UsageError("histogram needs at least one value");
  if (bins == 0) throw UsageError("histogram needs at least one bin");

  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  Histogram h;
  h.lo = *mn;
  h.hi = *mx;
  if (!(h.hi > h.lo)) {
    h.lo -= 0.5;
    h.hi += 0.5;
  }
  h.counts.assign(bins, 0);
  const double width = h.bin_width();
  for (const double v : values) {
    auto idx = static_cast<std::size_t>(std::floor((v - h.lo) / width));
    idx = std::min(idx, bins - 1);
    ++h.counts[idx];
  }
  return h;
}

std::string render_histogram_svg(std::span<const double> values,
                                 const PlotLabels& labels, std::size_t bins) {
  if (blank(labels.title) || blank(labels.x_label) || blank(labels.y_label)) {
    throw UsageError("plots need a title and both axis labels");
  }
  const Histogram h = make_histogram(values, bins);
  const std::size_t peak = *std::max_element(h.counts.begin(), h.counts.end());

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double x0 = kLeft;
  const double y0 = kTop + plot_h;  // baseline
  const double bar_w = plot_w / static_cast<double>(bins);

  const std::string title = escape_xml(labels.title);
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         coord(kWidth) + "\" height=\"" + coord(kHeight) + "\" viewBox=\"0 0 " +
         coord(kWidth) + " " + coord(kHeight) + "\">\n";
  svg += "<title>" + title + "</title>\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + coord(kWidth) + "\" height=\"" +
         coord(kHeight) + "\" fill=\"white\"/>\n";

  svg += "<g fill=\"steelblue\" stroke=\"white\" stroke-width=\"0.5\">\n";
  for (std::size_t i = 0; i < bins; ++i) {
    if (h.counts[i] == 0) continue;
    const double bar_h = plot_h * static_cast<double>(h.counts[i]) /
                         static_cast<double>(peak);
    svg += "<rect class=\"bar\" x=\"" + coord(x0 + bar_w * i) + "\" y=\"" +
           coord(y0 - bar_h) + "\" width=\"" + coord(bar_w) + "\" height=\"" +
           coord(bar_h) + "\"/>\n";
  }
  svg += "</g>\n";

  // Axes with end and midpoint ticks.
  svg += "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + coord(x0) + "\" y1=\"" + coord(y0) + "\" x2=\"" +
         coord(x0 + plot_w) + "\" y2=\"" + coord(y0) + "\"/>\n";
  svg += "<line x1=\"" + coord(x0) + "\" y1=\"" + coord(kTop) + "\" x2=\"" +
         coord(x0) + "\" y2=\"" + coord(y0) + "\"/>\n";
  svg += "</g>\n";

  svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (int t = 0; t <= 2; ++t) {
    const double frac = t / 2.0;
    const double x = x0 + plot_w * frac;
    const double value = h.lo + (h.hi - h.lo) * frac;
    svg += "<text x=\"" + coord(x) + "\" y=\"" + coord(y0 + 16) +
           "\" text-anchor=\"middle\">" + format_number(value) + "</text>\n";
    const double y = y0 - plot_h * frac;
    const double count = static_cast<double>(peak) * frac;
    svg += "<text x=\"" + coord(x0 - 6) + "\" y=\"" + coord(y + 4) +
           "\" text-anchor=\"end\">" + format_number(count) + "</text>\n";
  }
  svg += "</g>\n";

  svg += "<text class=\"title\" x=\"" + coord(kWidth / 2) + "\" y=\"" +
         coord(kTop / 2 + 6) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\" font-weight=\"bold\">" +
         title + "</text>\n";
  svg += "<text class=\"x-label\" x=\"" + coord(x0 + plot_w / 2) + "\" y=\"" +
         coord(kHeight - 24) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">" +
         escape_xml(labels.x_label) + "</text>\n";
  svg += "<text class=\"y-label\" x=\"0\" y=\"0\" transform=\"translate(22," +
         coord(kTop + plot_h / 2) +
         ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">" +
         escape_xml(labels.y_label) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace tankest
