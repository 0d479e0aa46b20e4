#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "scm/panel.hpp"

namespace scm {

// One parsed CSV series before panel assembly.
struct RawSeries {
  std::string label;
  std::map<MonthKey, double> obs;
};

// Reads the long-format wire file: header `series_id,label,month,value`,
// months as YYYY-MM, decimal point values. Rejects duplicate (id, month)
// rows, non-positive values, and malformed rows, naming the line.
// Row order is irrelevant to the result.
std::map<std::string, RawSeries> read_price_csv(std::istream& in,
                                                const std::string& source_name);

std::map<std::string, RawSeries> read_price_csv_file(const std::string& path);

// Writes series in the same wire format (values with shortest round-trip
// formatting, so read(write(panel)) reproduces the panel exactly).
void write_price_csv(std::ostream& out, const std::vector<const PriceSeries*>& series);

void write_panel_csv(std::ostream& out, const Panel& panel);
void write_panel_csv_file(const std::string& path, const Panel& panel);

// Picks the requested ids out of parsed CSV content, restricts them to the
// design window, and assembles a validated panel. Extra series are ignored.
Panel assemble_panel(const std::map<std::string, RawSeries>& raw,
                     const std::string& treated_id,
                     const std::vector<std::string>& donor_ids,
                     const StudyDesign& design);

// Single-series variant used for descriptive outputs (e.g. an all-items
// index alongside the treated series).
PriceSeries extract_series(const std::map<std::string, RawSeries>& raw,
                           const std::string& id, const StudyDesign& design);

}  // namespace scm
