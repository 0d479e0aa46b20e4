#include "scm/panel.hpp"

#include <set>
#include <sstream>

#include "scm/error.hpp"

namespace scm {

StudyDesign StudyDesign::make(MonthKey pre_start, MonthKey pre_end,
                              MonthKey treatment_start, MonthKey eval_end) {
  for (MonthKey m : {pre_start, pre_end, treatment_start, eval_end}) {
    if (!m.valid()) throw ConfigError("study design: invalid month " + m.str());
  }
  if (!(pre_start <= pre_end && pre_end < treatment_start &&
        treatment_start <= eval_end)) {
    throw ConfigError("study design: windows must satisfy pre_start <= pre_end < "
                      "treatment_start <= eval_end");
  }
  if (treatment_start != successor(pre_end)) {
    throw ConfigError("study design: treatment_start must immediately follow "
                      "pre_end (got " + treatment_start.str() + " after " +
                      pre_end.str() + ")");
  }
  StudyDesign d{pre_start, pre_end, treatment_start, eval_end};
  if (d.pre_months() < 2)
    throw ConfigError("study design: pre-treatment window needs >= 2 months");
  return d;
}

static std::vector<MonthKey> month_range(MonthKey from, MonthKey to) {
  std::vector<MonthKey> out;
  out.reserve(static_cast<std::size_t>(month_diff(from, to) + 1));
  for (MonthKey m = from; m <= to; m = successor(m)) out.push_back(m);
  return out;
}

std::vector<MonthKey> StudyDesign::months() const {
  return month_range(pre_start, eval_end);
}
std::vector<MonthKey> StudyDesign::pre_window() const {
  return month_range(pre_start, pre_end);
}
std::vector<MonthKey> StudyDesign::post_window() const {
  return month_range(treatment_start, eval_end);
}

StudyDesign default_design() {
  return StudyDesign::make({2022, 11}, {2023, 10}, {2023, 11}, {2024, 7});
}

std::vector<std::string> Panel::donor_ids() const {
  std::vector<std::string> ids;
  ids.reserve(donors.size());
  for (const auto& d : donors) ids.push_back(d.id());
  return ids;
}

const PriceSeries* Panel::find_donor(const std::string& id) const {
  for (const auto& d : donors)
    if (d.id() == id) return &d;
  return nullptr;
}

std::string ValidationReport::str() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    if (!v.series_id.empty()) os << v.series_id << ": ";
    os << v.message;
    if (v.month) os << " (" << v.month->str() << ")";
    os << "\n";
  }
  return os.str();
}

ValidationReport validate_panel(const Panel& panel) {
  ValidationReport report;
  auto add = [&](std::string id, std::optional<MonthKey> month, std::string msg) {
    report.violations.push_back({std::move(id), month, std::move(msg)});
  };

  if (panel.donors.size() < 2)
    add("", std::nullopt, "donor pool needs at least 2 series");

  std::set<std::string> seen;
  for (const auto& d : panel.donors) {
    if (d.id() == panel.treated.id())
      add(d.id(), std::nullopt, "treated unit present in donor pool");
    if (!seen.insert(d.id()).second)
      add(d.id(), std::nullopt, "duplicate donor id");
  }

  auto check_coverage = [&](const PriceSeries& s) {
    for (MonthKey m = panel.design.pre_start; m <= panel.design.eval_end;
         m = successor(m)) {
      if (!s.covers(m)) add(s.id(), m, "missing observation");
    }
  };
  check_coverage(panel.treated);
  for (const auto& d : panel.donors) check_coverage(d);

  return report;
}

Panel rebase_panel(const Panel& panel) {
  Panel out = panel;
  out.treated = rebase_to(panel.treated, panel.design.pre_start);
  for (auto& d : out.donors) d = rebase_to(d, panel.design.pre_start);
  return out;
}

}  // namespace scm
