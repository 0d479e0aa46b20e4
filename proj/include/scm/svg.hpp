#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scm {

// Minimal deterministic SVG line charts: fixed canvas, fixed palette,
// fixed number formatting. The CSV next to each chart is the authoritative
// artifact; the SVG is a convenience rendering.
class LineChart {
 public:
  LineChart(std::string title, std::vector<std::string> x_labels);

  void add_series(const std::string& name,
                  std::vector<std::optional<double>> values,
                  const std::string& color, const std::string& dash = "");

  // Shaded min/max region (e.g. a robustness band).
  void add_band(const std::string& name,
                std::vector<std::optional<std::pair<double, double>>> range,
                const std::string& fill);

  // Vertical marker at an x slot, with a small caption.
  void add_vline(int x_index, const std::string& label);

  // Shaded x interval [from, to] inclusive, with a caption.
  void add_span(int from_index, int to_index, const std::string& label);

  // Free-standing text anchored at a data point.
  void add_point_label(int x_index, double y, const std::string& text);

  std::string render() const;

 private:
  std::string title_;
  std::vector<std::string> x_labels_;

  struct Series {
    std::string name;
    std::vector<std::optional<double>> values;
    std::string color;
    std::string dash;
  };
  struct Band {
    std::string name;
    std::vector<std::optional<std::pair<double, double>>> range;
    std::string fill;
  };
  struct VLine {
    int x_index;
    std::string label;
  };
  struct Span {
    int from_index;
    int to_index;
    std::string label;
  };
  struct PointLabel {
    int x_index;
    double y;
    std::string text;
  };

  std::vector<Series> series_;
  std::vector<Band> bands_;
  std::vector<VLine> vlines_;
  std::vector<Span> spans_;
  std::vector<PointLabel> point_labels_;
};

}  // namespace scm
