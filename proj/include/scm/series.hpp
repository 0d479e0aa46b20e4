#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "scm/month.hpp"

namespace scm {

// One unit's monthly price index. Observations are contiguous by
// construction (start month + dense value vector) and strictly positive.
class PriceSeries {
 public:
  // Empty placeholder; covers() is false for every month. All loading and
  // generation paths go through the validating constructors below.
  PriceSeries() = default;

  PriceSeries(std::string id, std::string label, MonthKey start,
              std::vector<double> values);

  // Builds from a month->value map; rejects gaps.
  static PriceSeries from_map(std::string id, std::string label,
                              const std::map<MonthKey, double>& obs);

  const std::string& id() const { return id_; }
  const std::string& label() const { return label_; }
  MonthKey start() const { return start_; }
  MonthKey end() const { return advance(start_, size() - 1); }  // inclusive
  int size() const { return static_cast<int>(values_.size()); }

  bool covers(MonthKey m) const { return m >= start() && m <= end(); }
  bool covers(MonthKey from, MonthKey to) const {
    return covers(from) && covers(to) && from <= to;
  }

  double at(MonthKey m) const;
  const std::vector<double>& values() const { return values_; }
  std::map<MonthKey, double> to_map() const;

  friend bool operator==(const PriceSeries&, const PriceSeries&) = default;

 private:
  std::string id_;
  std::string label_;
  MonthKey start_{0, 1};
  std::vector<double> values_;
};

// Values over [from, to] inclusive, chronological. Throws DataError naming
// the series id and the missing months when the range is not covered.
Eigen::VectorXd slice(const PriceSeries& series, MonthKey from, MonthKey to);

// Series rescaled so that its value at `at` equals `base`. Optional
// transform; the pipeline records whether it was applied.
PriceSeries rebase_to(const PriceSeries& series, MonthKey at, double base = 100.0);

}  // namespace scm
