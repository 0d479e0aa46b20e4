#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scm/series.hpp"

namespace scm {

// Study windows: [pre_start, pre_end] fits the weights, treatment starts
// immediately after pre_end, evaluation runs through eval_end.
struct StudyDesign {
  MonthKey pre_start;
  MonthKey pre_end;
  MonthKey treatment_start;
  MonthKey eval_end;

  // Throws ConfigError unless
  //   pre_start <= pre_end < treatment_start <= eval_end,
  //   treatment_start == successor(pre_end), and pre length >= 2.
  static StudyDesign make(MonthKey pre_start, MonthKey pre_end,
                          MonthKey treatment_start, MonthKey eval_end);

  int pre_months() const { return month_diff(pre_start, pre_end) + 1; }
  int post_months() const { return month_diff(treatment_start, eval_end) + 1; }
  int total_months() const { return month_diff(pre_start, eval_end) + 1; }
  bool is_post(MonthKey m) const { return m >= treatment_start; }
  std::vector<MonthKey> months() const;       // pre_start..eval_end
  std::vector<MonthKey> pre_window() const;   // pre_start..pre_end
  std::vector<MonthKey> post_window() const;  // treatment_start..eval_end

  friend bool operator==(const StudyDesign&, const StudyDesign&) = default;
};

// Announcement 2023-11 dates the treatment; the 12 months before it form
// the fitting window and evaluation runs through 2024-07.
StudyDesign default_design();

// Treated unit plus donor pool over a common design.
struct Panel {
  PriceSeries treated;
  std::vector<PriceSeries> donors;
  StudyDesign design;

  std::vector<std::string> donor_ids() const;
  const PriceSeries* find_donor(const std::string& id) const;

  friend bool operator==(const Panel&, const Panel&) = default;
};

struct Violation {
  std::string series_id;  // empty when not tied to one series
  std::optional<MonthKey> month;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string str() const;
};

// Checks Panel invariants: distinct ids, treated not in the pool, full
// coverage of [pre_start, eval_end], at least two donors. Violations are
// returned as data, never thrown.
ValidationReport validate_panel(const Panel& panel);

// Every series rescaled to 100 at pre_start. Off by default in the pipeline.
Panel rebase_panel(const Panel& panel);

}  // namespace scm
