#include "scm/series.hpp"

#include <cmath>
#include <utility>

#include "scm/error.hpp"

namespace scm {

PriceSeries::PriceSeries(std::string id, std::string label, MonthKey start,
                         std::vector<double> values)
    : id_(std::move(id)), label_(std::move(label)), start_(start),
      values_(std::move(values)) {
  if (!start_.valid())
    throw DataError("series '" + id_ + "': invalid start month");
  if (values_.empty())
    throw DataError("series '" + id_ + "': no observations");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] <= 0.0) {
      throw DataError("series '" + id_ + "': non-positive value at " +
                      advance(start_, static_cast<int>(i)).str());
    }
  }
}

PriceSeries PriceSeries::from_map(std::string id, std::string label,
                                  const std::map<MonthKey, double>& obs) {
  if (obs.empty()) throw DataError("series '" + id + "': no observations");
  MonthKey expected = obs.begin()->first;
  std::vector<double> values;
  values.reserve(obs.size());
  for (const auto& [m, v] : obs) {
    if (m != expected) {
      throw DataError("series '" + id + "': gap in coverage, missing " +
                      expected.str());
    }
    values.push_back(v);
    expected = scm::successor(expected);
  }
  return PriceSeries(std::move(id), std::move(label), obs.begin()->first,
                     std::move(values));
}

double PriceSeries::at(MonthKey m) const {
  if (!covers(m)) {
    throw DataError("series '" + id_ + "': no observation for " + m.str() +
                    " (coverage " + start().str() + ".." + end().str() + ")");
  }
  return values_[static_cast<std::size_t>(month_diff(start_, m))];
}

std::map<MonthKey, double> PriceSeries::to_map() const {
  std::map<MonthKey, double> out;
  for (int i = 0; i < size(); ++i) out.emplace(advance(start_, i), values_[i]);
  return out;
}

Eigen::VectorXd slice(const PriceSeries& series, MonthKey from, MonthKey to) {
  if (!from.valid() || !to.valid() || from > to)
    throw ArgumentError("slice: invalid month range " + from.str() + ".." + to.str());
  if (!series.covers(from, to)) {
    std::string missing;
    for (MonthKey m = from; m <= to; m = successor(m)) {
      if (!series.covers(m)) {
        if (!missing.empty()) missing += ", ";
        missing += m.str();
      }
    }
    throw DataError("series '" + series.id() + "': range " + from.str() + ".." +
                    to.str() + " outside coverage, missing " + missing);
  }
  const int n = month_diff(from, to) + 1;
  const int offset = month_diff(series.start(), from);
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i)
    out[i] = series.values()[static_cast<std::size_t>(offset + i)];
  return out;
}

PriceSeries rebase_to(const PriceSeries& series, MonthKey at, double base) {
  const double anchor = series.at(at);
  std::vector<double> values = series.values();
  for (double& v : values) v *= base / anchor;
  return PriceSeries(series.id(), series.label(), series.start(), std::move(values));
}

}  // namespace scm
