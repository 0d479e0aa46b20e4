#include "scm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "scm/error.hpp"

namespace scm {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 30.0;
constexpr double kTop = 48.0;
constexpr double kBottom = 78.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Largest "nice" step (1/2/2.5/5 x 10^k) giving at most `max_ticks` ticks.
double nice_step(double range, int max_ticks) {
  if (range <= 0.0) return 1.0;
  const double raw = range / max_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (mag * m >= raw) return mag * m;
  }
  return mag * 10.0;
}

}  // namespace

LineChart::LineChart(std::string title, std::vector<std::string> x_labels)
    : title_(std::move(title)), x_labels_(std::move(x_labels)) {
  if (x_labels_.empty()) throw ArgumentError("line chart: no x labels");
}

void LineChart::add_series(const std::string& name,
                           std::vector<std::optional<double>> values,
                           const std::string& color, const std::string& dash) {
  if (values.size() != x_labels_.size())
    throw ArgumentError("line chart: series '" + name + "' length mismatch");
  series_.push_back({name, std::move(values), color, dash});
}

void LineChart::add_band(const std::string& name,
                         std::vector<std::optional<std::pair<double, double>>> range,
                         const std::string& fill) {
  if (range.size() != x_labels_.size())
    throw ArgumentError("line chart: band '" + name + "' length mismatch");
  bands_.push_back({name, std::move(range), fill});
}

void LineChart::add_vline(int x_index, const std::string& label) {
  vlines_.push_back({x_index, label});
}

void LineChart::add_span(int from_index, int to_index, const std::string& label) {
  spans_.push_back({from_index, to_index, label});
}

void LineChart::add_point_label(int x_index, double y, const std::string& text) {
  point_labels_.push_back({x_index, y, text});
}

std::string LineChart::render() const {
  double lo = 0.0, hi = 0.0;
  bool any = false;
  auto take = [&](double v) {
    if (!any) {
      lo = hi = v;
      any = true;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  };
  for (const auto& s : series_)
    for (const auto& v : s.values)
      if (v) take(*v);
  for (const auto& b : bands_)
    for (const auto& r : b.range)
      if (r) {
        take(r->first);
        take(r->second);
      }
  for (const auto& p : point_labels_) take(p.y);
  if (!any) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-9) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.06 * (hi - lo);
  lo -= pad;
  hi += pad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const int n = static_cast<int>(x_labels_.size());
  auto x_of = [&](double i) {
    return n == 1 ? kLeft + plot_w / 2 : kLeft + plot_w * i / (n - 1);
  };
  auto y_of = [&](double v) { return kTop + plot_h * (hi - v) / (hi - lo); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << kWidth << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth
      << " " << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" font-family=\"sans-serif\""
      << " font-size=\"16\" text-anchor=\"middle\">" << xml_escape(title_)
      << "</text>\n";

  for (const auto& span : spans_) {
    const double x0 = x_of(span.from_index);
    const double x1 = x_of(span.to_index);
    svg << "<rect x=\"" << num(x0) << "\" y=\"" << num(kTop) << "\" width=\""
        << num(x1 - x0) << "\" height=\"" << num(plot_h)
        << "\" fill=\"#f2e8cf\" fill-opacity=\"0.7\"/>\n";
    svg << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kTop + 14)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#7a6a28\""
        << " text-anchor=\"middle\">" << xml_escape(span.label) << "</text>\n";
  }

  for (const auto& band : bands_) {
    std::ostringstream points;
    bool open = false;
    std::vector<std::pair<double, double>> upper, lower;
    for (int i = 0; i < n; ++i) {
      const auto& r = band.range[static_cast<std::size_t>(i)];
      if (r) {
        upper.emplace_back(x_of(i), y_of(r->second));
        lower.emplace_back(x_of(i), y_of(r->first));
        open = true;
      }
    }
    if (!open) continue;
    points << "<polygon fill=\"" << band.fill << "\" fill-opacity=\"0.35\""
           << " stroke=\"none\" points=\"";
    for (const auto& [x, y] : upper) points << num(x) << ',' << num(y) << ' ';
    for (auto it = lower.rbegin(); it != lower.rend(); ++it)
      points << num(it->first) << ',' << num(it->second) << ' ';
    points << "\"/>\n";
    svg << points.str();
  }

  // Horizontal grid and y tick labels.
  const double step = nice_step(hi - lo, 6);
  for (double tick = std::ceil(lo / step) * step; tick <= hi + 1e-12; tick += step) {
    const double y = y_of(tick);
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\""
        << num(kWidth - kRight) << "\" y2=\"" << num(y)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    char label[32];
    std::snprintf(label, sizeof(label), "%g", tick + 0.0);
    svg << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
        << label << "</text>\n";
  }

  // X tick labels, thinned so at most ~14 appear.
  const int every = std::max(1, (n + 13) / 14);
  for (int i = 0; i < n; i += every) {
    const double x = x_of(i);
    svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(kHeight - kBottom)
        << "\" x2=\"" << num(x) << "\" y2=\"" << num(kHeight - kBottom + 5)
        << "\" stroke=\"#333333\"/>\n";
    svg << "<text x=\"" << num(x) << "\" y=\"" << num(kHeight - kBottom + 22)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\""
        << " transform=\"rotate(35 " << num(x) << " "
        << num(kHeight - kBottom + 22) << ")\">"
        << xml_escape(x_labels_[static_cast<std::size_t>(i)]) << "</text>\n";
  }

  svg << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
      << num(plot_w) << "\" height=\"" << num(plot_h)
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  for (const auto& vline : vlines_) {
    const double x = x_of(vline.x_index);
    svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop) << "\" x2=\""
        << num(x) << "\" y2=\"" << num(kHeight - kBottom)
        << "\" stroke=\"#999999\" stroke-dasharray=\"2,3\"/>\n";
    svg << "<text x=\"" << num(x + 4) << "\" y=\"" << num(kTop + 26)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#666666\">"
        << xml_escape(vline.label) << "</text>\n";
  }

  for (const auto& s : series_) {
    std::ostringstream seg;
    bool in_segment = false;
    for (int i = 0; i < n; ++i) {
      const auto& v = s.values[static_cast<std::size_t>(i)];
      if (v) {
        if (!in_segment) {
          seg << "<polyline fill=\"none\" stroke=\"" << s.color
              << "\" stroke-width=\"2\"";
          if (!s.dash.empty()) seg << " stroke-dasharray=\"" << s.dash << "\"";
          seg << " points=\"";
          in_segment = true;
        }
        seg << num(x_of(i)) << ',' << num(y_of(*v)) << ' ';
      } else if (in_segment) {
        seg << "\"/>\n";
        in_segment = false;
      }
    }
    if (in_segment) seg << "\"/>\n";
    svg << seg.str();
  }

  for (const auto& p : point_labels_) {
    svg << "<text x=\"" << num(x_of(p.x_index)) << "\" y=\""
        << num(y_of(p.y) - 8)
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">"
        << xml_escape(p.text) << "</text>\n";
  }

  // Legend in the top-left corner of the plot area.
  double ly = kTop + 16;
  for (const auto& s : series_) {
    svg << "<line x1=\"" << num(kLeft + 10) << "\" y1=\"" << num(ly) << "\" x2=\""
        << num(kLeft + 34) << "\" y2=\"" << num(ly) << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"";
    if (!s.dash.empty()) svg << " stroke-dasharray=\"" << s.dash << "\"";
    svg << "/>\n";
    svg << "<text x=\"" << num(kLeft + 40) << "\" y=\"" << num(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(s.name)
        << "</text>\n";
    ly += 18;
  }
  for (const auto& band : bands_) {
    svg << "<rect x=\"" << num(kLeft + 10) << "\" y=\"" << num(ly - 6)
        << "\" width=\"24\" height=\"10\" fill=\"" << band.fill
        << "\" fill-opacity=\"0.35\"/>\n";
    svg << "<text x=\"" << num(kLeft + 40) << "\" y=\"" << num(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << xml_escape(band.name) << "</text>\n";
    ly += 18;
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace scm
